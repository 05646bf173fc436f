// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "cminer/live_transports.hpp"
#include "cminer/pipeline.hpp"
#include "cminer/recognizer.hpp"

namespace {

using namespace cminer;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

struct CliConfig {
  std::string dataset;
  std::string dataset_name = "dataset";
  std::string locations;
  std::string merge_map;
  std::string markers;
  bool offline = false;
  std::string fixtures;
  std::uint64_t n = 20;
  std::uint64_t seed = 42;
  std::string cache_dir = ".cminer-cache";
  std::string out_dir = "out";
  std::string decisions;
  std::string mapping;
  std::int64_t gap_tolerance = 300;
  std::int64_t window = 3600;
  double overlap = 0.5;
  double relevance_threshold = 0.2;
  std::uint64_t fan_out = 4;
  std::uint64_t error_budget = 0;
  std::string summarizer_provider;
  std::string summarizer_model;
  std::string summarizer_endpoint;
  std::string querier_provider;
  std::string querier_model;
  std::string querier_endpoint;
};

using FieldPtr = std::variant<std::string*, bool*, std::uint64_t*, std::int64_t*, double*>;

struct Field {
  std::string name;  // long flag name and config file key
  FieldPtr target;
  std::string help;
};

std::vector<Field> field_table(CliConfig& c) {
  return {
      {"dataset", &c.dataset, "raw sensor log to process"},
      {"dataset-name", &c.dataset_name, "name used in report headers"},
      {"locations", &c.locations, "sensor id to location phrase CSV"},
      {"merge-map", &c.merge_map, "raw to canonical label CSV"},
      {"markers", &c.markers, "sequence marker lexicon file (default: built-in)"},
      {"offline", &c.offline, "serve completions from fixtures, never the network"},
      {"fixtures", &c.fixtures, "fixture completions JSON (required with offline)"},
      {"n", &c.n, "paragraphs sampled per activity"},
      {"seed", &c.seed, "sampling seed, echoed in reports"},
      {"cache-dir", &c.cache_dir, "completion cache directory"},
      {"out-dir", &c.out_dir, "output directory for stores and reports"},
      {"decisions", &c.decisions, "scripted review decisions JSON"},
      {"mapping", &c.mapping, "construct to sensor mapping file"},
      {"gap-tolerance", &c.gap_tolerance, "max seconds between ordered steps"},
      {"window", &c.window, "max seconds across a whole match"},
      {"overlap", &c.overlap, "fraction of the shorter span needed to count a match"},
      {"relevance-threshold", &c.relevance_threshold, "minimum relevance score"},
      {"fan-out", &c.fan_out, "activities processed concurrently"},
      {"error-budget", &c.error_budget, "parse diagnostics tolerated by ingest"},
      {"summarizer-provider", &c.summarizer_provider, "summarizer provider family"},
      {"summarizer-model", &c.summarizer_model, "summarizer model name"},
      {"summarizer-endpoint", &c.summarizer_endpoint, "summarizer endpoint"},
      {"querier-provider", &c.querier_provider, "querier provider family"},
      {"querier-model", &c.querier_model, "querier model name"},
      {"querier-endpoint", &c.querier_endpoint, "querier endpoint"},
  };
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error("not a boolean: '" + text + "'");
}

void apply_config_value(const Field& field, const std::string& value) {
  try {
    std::visit(
        [&](auto* target) {
          using T = std::remove_pointer_t<decltype(target)>;
          if constexpr (std::is_same_v<T, std::string>) {
            *target = value;
          } else if constexpr (std::is_same_v<T, bool>) {
            *target = parse_bool(value);
          } else if constexpr (std::is_same_v<T, double>) {
            *target = std::stod(value);
          } else if constexpr (std::is_signed_v<T>) {
            *target = static_cast<T>(std::stoll(value));
          } else {
            *target = static_cast<T>(std::stoull(value));
          }
        },
        field.target);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("bad value for config key '" + field.name + "': '" + value + "'");
  }
}

// Flat key=value lines, '#' comments. Keys are the long flag names, so any
// file setting can be overridden by passing the same-name flag.
void load_flat_config(const std::string& path, std::vector<Field>& fields) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto trimmed = strings::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw Error("config line " + std::to_string(line_no) + " is not key=value: " + line);
    }
    std::string key(strings::trim(trimmed.substr(0, eq)));
    std::string value(strings::trim(trimmed.substr(eq + 1)));
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const Field& f) { return f.name == key; });
    if (it == fields.end()) throw Error("unknown config key '" + key + "' in " + path);
    apply_config_value(*it, value);
  }
}

void register_fields(CLI::App* cmd, std::vector<Field>& fields) {
  for (auto& field : fields) {
    std::visit(
        [&](auto* target) {
          using T = std::remove_pointer_t<decltype(target)>;
          if constexpr (std::is_same_v<T, bool>) {
            cmd->add_flag("--" + field.name, *target, field.help);
          } else {
            cmd->add_option("--" + field.name, *target, field.help);
          }
        },
        field.target);
  }
  // accepted everywhere; the value is consumed by the pre-scan
  std::string sink;
  cmd->add_option("--config", sink, "flat key=value config file")->expected(1);
}

ProviderProfile summarizer_profile(const CliConfig& config) {
  auto profile = default_summarizer_profile();
  if (!config.summarizer_provider.empty()) profile.provider_name = config.summarizer_provider;
  if (!config.summarizer_model.empty()) profile.model_name = config.summarizer_model;
  if (!config.summarizer_endpoint.empty()) profile.endpoint = config.summarizer_endpoint;
  return profile;
}

ProviderProfile querier_profile(const CliConfig& config) {
  auto profile = default_querier_profile();
  if (!config.querier_provider.empty()) profile.provider_name = config.querier_provider;
  if (!config.querier_model.empty()) profile.model_name = config.querier_model;
  if (!config.querier_endpoint.empty()) profile.endpoint = config.querier_endpoint;
  return profile;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(message);
}

PipelineOptions to_pipeline_options(const CliConfig& config) {
  require(!config.dataset.empty(), "--dataset is required");
  require(!config.locations.empty(), "--locations is required");
  PipelineOptions options;
  options.dataset_name = config.dataset_name;
  options.dataset_path = config.dataset;
  options.locations_path = config.locations;
  if (!config.merge_map.empty()) options.merge_map_path = config.merge_map;
  if (!config.markers.empty()) options.markers_path = config.markers;
  options.out_dir = config.out_dir;
  options.cache_dir = config.cache_dir;
  options.summarization.n = config.n;
  options.summarization.sample_seed = config.seed;
  options.summarizer = summarizer_profile(config);
  options.querier = querier_profile(config);
  options.relevance.threshold = config.relevance_threshold;
  options.fan_out = config.fan_out;
  return options;
}

struct Transports {
  std::unique_ptr<Transport> owned_summarizer;
  std::unique_ptr<Transport> owned_querier;  // null offline; both share one fixture
  Transport* summarizer = nullptr;
  Transport* querier = nullptr;
};

Transports make_transports(const CliConfig& config, const PipelineOptions& options) {
  Transports t;
  if (config.offline) {
    require(!config.fixtures.empty(), "offline mode requires --fixtures");
    t.owned_summarizer =
        std::make_unique<FixtureTransport>(FixtureTransport::load(config.fixtures).entries());
    t.summarizer = t.owned_summarizer.get();
    t.querier = t.owned_summarizer.get();
  } else {
    // keys come from the environment only, never from config files
    require_env_credential(options.summarizer.credential_ref);
    require_env_credential(options.querier.credential_ref);
    ensure_distinct_families(options.summarizer, options.querier);
    t.owned_summarizer = make_live_transport(options.summarizer);
    t.owned_querier = make_live_transport(options.querier);
    t.summarizer = t.owned_summarizer.get();
    t.querier = t.owned_querier.get();
  }
  return t;
}

struct IngestOutput {
  Diagnostics diagnostics;
  CanonicalizeResult canonical;
  std::vector<SensorEvent> events;
};

IngestOutput run_ingest_stages(const CliConfig& config) {
  require(!config.dataset.empty(), "--dataset is required");
  IngestOutput out;
  ParseResult parsed = parse_file(config.dataset);
  auto instances = segment_instances(parsed, &parsed.diagnostics);
  out.diagnostics = parsed.diagnostics;
  LabelMergeMap merge_map;
  if (!config.merge_map.empty()) merge_map = LabelMergeMap::load(config.merge_map);
  out.canonical = canonicalize_labels(std::move(instances), merge_map);
  out.events = std::move(parsed.events);
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records) {
  std::filesystem::remove(path);
  for (const auto& record : records) jsonl::append(path, record);
}

void print_diagnostics(const Diagnostics& diagnostics) {
  std::cout << "diagnostics: " << diagnostics.size() << "\n";
  std::size_t shown = 0;
  for (const auto& d : diagnostics.items) {
    if (++shown > 10) {
      std::cout << "  ... " << (diagnostics.size() - 10) << " more\n";
      break;
    }
    std::cout << "  line " << d.line_no << ": " << d.message << "\n";
  }
}

int cmd_ingest(const CliConfig& config) {
  auto out = run_ingest_stages(config);
  std::vector<nlohmann::json> records;
  for (const auto& instance : out.canonical.instances) records.push_back(instance_to_json(instance));
  std::filesystem::create_directories(config.out_dir);
  write_jsonl(std::filesystem::path(config.out_dir) / "instances.jsonl", records);

  for (const auto& [label, count] : out.canonical.counts_per_label) {
    std::cout << label << ": " << count << "\n";
  }
  print_diagnostics(out.diagnostics);
  if (out.diagnostics.size() > config.error_budget) {
    std::cout << "error budget " << config.error_budget << " exceeded\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_textualize(const CliConfig& config) {
  require(!config.locations.empty(), "--locations is required");
  auto out = run_ingest_stages(config);
  const auto locations = LocationMap::load(config.locations);

  std::vector<nlohmann::json> instance_records;
  std::vector<nlohmann::json> paragraph_records;
  for (const auto& instance : out.canonical.instances) {
    instance_records.push_back(instance_to_json(instance));
    paragraph_records.push_back(paragraph_to_json(encode_instance(instance, locations)));
  }
  std::filesystem::create_directories(config.out_dir);
  write_jsonl(std::filesystem::path(config.out_dir) / "instances.jsonl", instance_records);
  write_jsonl(std::filesystem::path(config.out_dir) / "paragraphs.jsonl", paragraph_records);
  std::cout << paragraph_records.size() << " paragraphs for "
            << out.canonical.counts_per_label.size() << " activities\n";
  return kExitOk;
}

int cmd_summarize(const CliConfig& config) {
  require(!config.locations.empty(), "--locations is required");
  auto options = to_pipeline_options(config);
  auto transports = make_transports(config, options);

  auto out = run_ingest_stages(config);
  const auto locations = LocationMap::load(config.locations);
  std::map<std::string, std::vector<InstanceParagraph>> by_label;
  std::vector<nlohmann::json> instance_records;
  std::vector<nlohmann::json> paragraph_records;
  for (const auto& instance : out.canonical.instances) {
    auto paragraph = encode_instance(instance, locations);
    instance_records.push_back(instance_to_json(instance));
    paragraph_records.push_back(paragraph_to_json(paragraph));
    by_label[instance.label].push_back(std::move(paragraph));
  }

  ResponseCache cache(options.cache_dir);
  std::vector<nlohmann::json> summary_records;
  std::size_t failures = 0;
  for (const auto& [label, paragraphs] : by_label) {
    try {
      auto sampled = sample_paragraphs(label, paragraphs, options.summarization);
      auto summary = summarize_activity(label, sampled, options.summarizer,
                                        *transports.summarizer, cache, options.retry);
      summary_records.push_back(summary_to_json(summary));
      std::cout << "ok " << label << "\n";
    } catch (const Error& e) {
      ++failures;
      std::cout << "FAIL " << label << ": " << e.what() << "\n";
    }
  }

  std::filesystem::create_directories(config.out_dir);
  write_jsonl(std::filesystem::path(config.out_dir) / "instances.jsonl", instance_records);
  write_jsonl(std::filesystem::path(config.out_dir) / "paragraphs.jsonl", paragraph_records);
  write_jsonl(std::filesystem::path(config.out_dir) / "summaries.jsonl", summary_records);
  std::cout << summary_records.size() << " summarized, " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitPartial;
}

int run_full_pipeline(const CliConfig& config) {
  auto options = to_pipeline_options(config);
  auto transports = make_transports(config, options);
  auto result = run_pipeline(options, *transports.summarizer, *transports.querier);

  for (const auto& outcome : result.outcomes) {
    if (outcome.ok) {
      std::cout << "ok " << outcome.label << " (" << to_string(outcome.set.category) << ", "
                << outcome.set.constructs.size() << " constructs)\n";
    } else {
      std::cout << "FAIL " << outcome.label << ": " << outcome.error << "\n";
    }
  }
  print_diagnostics(result.diagnostics);
  std::cout << "report: " << result.report_path.string() << "\n";
  std::cout << (result.outcomes.size() - result.failures) << " ok, " << result.failures
            << " failed\n";
  return result.failures == 0 ? kExitOk : kExitPartial;
}

int cmd_extract(const CliConfig& config) { return run_full_pipeline(config); }
int cmd_pipeline(const CliConfig& config) { return run_full_pipeline(config); }

std::vector<std::size_t> kept_indices(std::size_t count, const std::vector<std::size_t>& drop) {
  std::set<std::size_t> dropped(drop.begin(), drop.end());
  std::vector<std::size_t> kept;
  for (std::size_t i = 1; i <= count; ++i) {
    if (!dropped.count(i)) kept.push_back(i);
  }
  return kept;
}

void commit_review(ConstructStore& store, const std::filesystem::path& log_path,
                   const StoredConstructSet& base, const ReviewDecision& decision,
                   const std::string& note) {
  auto updated = apply_review(base.set, decision);

  // store.append overwrites the latest() slot `base` refers to; the log entry
  // must capture the pre-append state first
  DecisionLogEntry entry;
  entry.activity_label = base.set.activity_label;
  entry.revision = base.revision;
  entry.kept = kept_indices(base.set.constructs.size(), decision.drop);
  entry.category_override = decision.category_override;
  entry.note = note;
  entry.timestamp = format_iso8601_utc(std::chrono::system_clock::now());

  const auto revision = store.append(updated);
  append_decision(log_path, entry);

  std::cout << "reviewed " << entry.activity_label << ": "
            << to_string(updated.review_state) << ", revision " << revision << "\n";
}

int scripted_review(ConstructStore& store, const std::filesystem::path& log_path,
                    const std::string& decisions_path) {
  std::ifstream in(decisions_path);
  require(static_cast<bool>(in), "cannot open decisions file: " + decisions_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("decisions file is not valid json: " + std::string(e.what()));
  }
  require(doc.is_array(), "decisions file must be a json array");

  for (const auto& item : doc) {
    if (item.value("interrupt", false)) {
      std::cout << "review interrupted; remaining activities unchanged\n";
      return kExitOk;
    }
    const auto label = item.at("activity").get<std::string>();
    auto it = store.latest().find(label);
    require(it != store.latest().end(), "no construct set for activity '" + label + "'");

    ReviewDecision decision;
    for (const auto& index : item.value("drop", nlohmann::json::array())) {
      decision.drop.push_back(index.get<std::size_t>());
    }
    if (item.contains("category")) {
      const auto category = item.at("category").get<std::string>();
      if (category != "confirm") decision.category_override = category_from_string(category);
    }
    if (item.contains("confirm_count")) {
      decision.confirm_count = item.at("confirm_count").get<std::size_t>();
    }
    commit_review(store, log_path, it->second, decision, item.value("note", ""));
  }
  return kExitOk;
}

int interactive_review(ConstructStore& store, const std::filesystem::path& log_path) {
  // iterate over a label snapshot; commits mutate the store as we go
  std::vector<std::string> labels;
  for (const auto& [label, _] : store.latest()) labels.push_back(label);

  for (const auto& label : labels) {
    const auto& base = store.latest().at(label);
    std::cout << "\n" << label << " (" << to_string(base.set.category) << ", revision "
              << base.revision << ")\n";
    for (const auto& construct : base.set.constructs) {
      std::cout << "  " << construct.index << ". " << construct.name;
      if (!construct.detail.empty()) std::cout << " (" << construct.detail << ")";
      std::cout << " [" << to_string(construct.relevance) << " "
                << construct.relevance_score << "]\n";
    }

    std::cout << "drop indices (comma-separated, enter keeps all, q aborts): " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line) || strings::trim(line) == "q") {
      std::cout << "\naborted; this and later activities are unchanged\n";
      return kExitOk;
    }
    ReviewDecision decision;
    for (auto part : strings::split(line, ',')) {
      auto token = strings::trim(part);
      if (token.empty()) continue;
      decision.drop.push_back(std::stoull(std::string(token)));
    }

    std::cout << "category [" << to_string(base.set.category)
              << "] (Event/Action, enter confirms): " << std::flush;
    if (!std::getline(std::cin, line)) {
      std::cout << "\naborted; this and later activities are unchanged\n";
      return kExitOk;
    }
    auto token = strings::trim(line);
    if (token == "Event" || token == "E") decision.category_override = Category::Event;
    if (token == "Action" || token == "A") decision.category_override = Category::Action;

    commit_review(store, log_path, base, decision, "");
  }
  return kExitOk;
}

int cmd_review(const CliConfig& config) {
  const auto store_path = std::filesystem::path(config.out_dir) / "constructs.jsonl";
  require(std::filesystem::exists(store_path),
          "no construct store at " + store_path.string() + "; run 'cminer pipeline' first");
  ConstructStore store(store_path);
  require(!store.empty(), "construct store is empty; run 'cminer pipeline' first");

  const auto log_path = std::filesystem::path(config.out_dir) / "review_log.jsonl";
  if (!config.decisions.empty()) return scripted_review(store, log_path, config.decisions);
  return interactive_review(store, log_path);
}

int cmd_recognize(const CliConfig& config) {
  require(!config.locations.empty(), "--locations is required");
  require(!config.mapping.empty(), "--mapping is required");
  const auto store_path = std::filesystem::path(config.out_dir) / "constructs.jsonl";
  require(std::filesystem::exists(store_path),
          "no construct store at " + store_path.string() + "; run 'cminer pipeline' first");
  ConstructStore store(store_path);
  require(!store.empty(), "construct store is empty; run 'cminer pipeline' first");

  std::vector<const StoredConstructSet*> reviewed;
  for (const auto& [label, stored] : store.latest()) {
    if (stored.set.review_state != ReviewState::Machine) reviewed.push_back(&stored);
  }
  require(!reviewed.empty(), "no reviewed construct sets; run 'cminer review' first");

  const auto mapping = SymbolMapping::load(config.mapping);
  auto out = run_ingest_stages(config);
  const auto locations = LocationMap::load(config.locations);
  const auto symbols = symbolize_stream(out.events, locations);

  std::vector<ConstructPattern> patterns;
  std::set<std::string> evaluated;
  for (const auto* stored : reviewed) {
    const auto& label = stored->set.activity_label;
    if (!mapping.has_activity(label)) {
      std::cerr << "warning: skipping " << label << ": no mapping section\n";
      continue;
    }
    try {
      patterns.push_back(
          compile_pattern(stored->set, mapping, config.gap_tolerance, config.window));
      evaluated.insert(label);
    } catch (const UnmappedConstruct& e) {
      std::cerr << "warning: skipping " << label << ": " << e.what() << "\n";
    }
  }
  require(!patterns.empty(), "no activity could be compiled against the mapping");

  std::vector<MatchResult> matches;
  for (const auto& pattern : patterns) {
    auto found = match_stream(pattern, symbols);
    matches.insert(matches.end(), found.begin(), found.end());
  }

  std::vector<ActivityInstance> truth;
  for (auto& instance : out.canonical.instances) {
    if (evaluated.count(instance.label)) truth.push_back(std::move(instance));
  }

  auto report = evaluate(matches, truth, {config.overlap});
  const auto csv_path = std::filesystem::path(config.out_dir) / "metrics.csv";
  std::filesystem::create_directories(config.out_dir);
  {
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(csv), "cannot write " + csv_path.string());
    csv << metrics_to_csv(report);
  }

  for (const auto& m : report.per_label) {
    std::cout << m.label << ": tp=" << m.tp << " fp=" << m.fp << " fn=" << m.fn
              << " f1=" << m.f1 << "\n";
  }
  std::cout << "macro f1: " << report.macro.f1 << "\n";
  std::cout << "metrics: " << csv_path.string() << "\n";
  return kExitOk;
}

int cmd_report(const CliConfig& config) {
  const auto out_dir = std::filesystem::path(config.out_dir);
  const auto instances_path = out_dir / "instances.jsonl";
  const auto store_path = out_dir / "constructs.jsonl";
  require(std::filesystem::exists(instances_path),
          "no instance store at " + instances_path.string() + "; run 'cminer ingest' first");
  require(std::filesystem::exists(store_path),
          "no construct store at " + store_path.string() + "; run 'cminer pipeline' first");

  std::set<std::string> labels;
  for (const auto& record : jsonl::read(instances_path)) {
    labels.insert(record.at("label").get<std::string>());
  }
  ConstructStore store(store_path);

  std::vector<ReportRow> rows;
  for (const auto& label : labels) {
    auto it = store.latest().find(label);
    if (it == store.latest().end()) {
      rows.push_back({label, true, {}});
    } else {
      rows.push_back({label, false, it->second.set});
    }
  }

  const auto markers =
      config.markers.empty() ? default_marker_lexicon() : MarkerLexicon::load(config.markers);
  ReportContext context{config.dataset_name, config.seed, markers.version,
                        summarizer_profile(config), querier_profile(config)};
  const auto report_path = out_dir / "report.md";
  {
    std::ofstream report(report_path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(report), "cannot write " + report_path.string());
    report << render_construct_report(context, rows);
  }
  std::cout << "report: " << report_path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig config;
  auto fields = field_table(config);

  // the config file loads before flag parsing so flags win
  try {
    for (int i = 1; i < argc; ++i) {
      std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        load_flat_config(argv[i + 1], fields);
      } else if (arg.rfind("--config=", 0) == 0) {
        load_flat_config(arg.substr(9), fields);
      }
    }
  } catch (const cminer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"structural construct mining over ambient sensor logs"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ingest", "parse and segment the sensor log into activity instances"},
      {"textualize", "render instances as natural language paragraphs"},
      {"summarize", "sample paragraphs and produce one summary per activity"},
      {"extract", "derive construct sets from summaries (full derivation)"},
      {"review", "confirm or edit construct sets (interactive or scripted)"},
      {"recognize", "match reviewed constructs against the stream and score"},
      {"report", "render the construct report from existing stores"},
      {"pipeline", "run every stage end to end"},
  };
  for (const auto& [name, help] : commands) {
    auto* cmd = app.add_subcommand(name, help);
    register_fields(cmd, fields);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("ingest")) return cmd_ingest(config);
    if (app.got_subcommand("textualize")) return cmd_textualize(config);
    if (app.got_subcommand("summarize")) return cmd_summarize(config);
    if (app.got_subcommand("extract")) return cmd_extract(config);
    if (app.got_subcommand("review")) return cmd_review(config);
    if (app.got_subcommand("recognize")) return cmd_recognize(config);
    if (app.got_subcommand("report")) return cmd_report(config);
    if (app.got_subcommand("pipeline")) return cmd_pipeline(config);
  } catch (const cminer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
