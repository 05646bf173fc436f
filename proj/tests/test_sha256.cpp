// SPDX-License-Identifier: Apache-2.0
#include "cminer/sha256.hpp"

#include <string>

#include "catch_amalgamated.hpp"

using cminer::sha256_hex;

// Expected digests are the published FIPS 180-4 test vectors.
TEST_CASE("sha256 matches standard vectors", "[sha256]") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 handles block boundaries", "[sha256]") {
  // 55, 56, 63, 64, 65 bytes straddle the padding edge cases
  auto rep = [](std::size_t n) { return std::string(n, 'a'); };
  CHECK(sha256_hex(rep(55)) == "9f4390f8d30c2dd92ec9f095b65e2b9ae9b0a925a5258e241c9f1e910f734318");
  CHECK(sha256_hex(rep(56)) == "b35439a4ac6f0948b6d6f9e3c6af0f5f590ce20f1bde7090ef7970686ec6738a");
  CHECK(sha256_hex(rep(63)) == "7d3e74a05d7db15bce4ad9ec0658ea98e3f06eeecf16b4c6fff2da457ddc2f34");
  CHECK(sha256_hex(rep(64)) == "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
  CHECK(sha256_hex(rep(65)) == "635361c48bb9eab14198e76ea8ab7f1a41685d6ad62aa9146d301d4f17eb0ae0");
  CHECK(sha256_hex(std::string(1'000'000, 'a')) ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 is sensitive to single-bit changes", "[sha256]") {
  CHECK(sha256_hex("gpt-4:prompt") != sha256_hex("gpt-4:promps"));
  CHECK(sha256_hex("a").size() == 64);
}
