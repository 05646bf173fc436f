# SPDX-License-Identifier: Apache-2.0
"""Regenerates the checked-in sample CASAS logs.

Each activity instance follows a fixed sensor script so that ordered-step
patterns in data/mappings/ actually occur inside the labeled spans. Jitter
comes from a seeded RNG; reruns are byte-identical.
"""

import random
from datetime import datetime, timedelta
from pathlib import Path

HERE = Path(__file__).resolve().parent


def fmt(ts):
    return ts.strftime("%Y-%m-%d %H:%M:%S")


class LogBuilder:
    def __init__(self, seed):
        self.rng = random.Random(seed)
        self.lines = []
        self.last = None

    def _emit(self, ts, sensor, value, tag=""):
        if self.last is not None and ts <= self.last:
            ts = self.last + timedelta(seconds=1)
        self.last = ts
        line = f"{fmt(ts)} {sensor} {value}"
        if tag:
            line += f" {tag}"
        self.lines.append(line)
        return ts

    def instance(self, label, start, script):
        """script: list of (delta_seconds, sensor, value); deltas are cumulative."""
        ts = start
        for i, (delta, sensor, value) in enumerate(script):
            ts = start + timedelta(seconds=delta + self.rng.randint(0, 2))
            if i == 0:
                ts = self._emit(ts, sensor, value, f"{label} begin")
            elif i == len(script) - 1:
                ts = self._emit(ts, sensor, value, f"{label} end")
            else:
                ts = self._emit(ts, sensor, value)

    def noise(self, start, events):
        ts = start
        for delta, sensor, value in events:
            ts = start + timedelta(seconds=delta)
            ts = self._emit(ts, sensor, value)

    def write(self, path):
        path.write_text("\n".join(self.lines) + "\n")


def toggles(pairs, step=20, hold=6):
    """ON/OFF pulse per sensor, `step` seconds apart."""
    script = []
    t = 0
    for sensor in pairs:
        script.append((t, sensor, "ON"))
        script.append((t + hold, sensor, "OFF"))
        t += step
    return script


def build_aruba():
    b = LogBuilder(seed=70126)

    sleeping = [
        (0, "M004", "ON"), (40, "M004", "OFF"),
        (1200, "T001", "20.5"),
        (5400, "M002", "ON"), (5440, "M002", "OFF"),
        (9000, "T001", "20.0"),
        (12600, "M003", "ON"), (12640, "M003", "OFF"),
        (16200, "M001", "ON"), (16260, "M001", "OFF"),
        (18000, "M004", "ON"), (18050, "M004", "OFF"),
    ]
    bed_to_toilet = [
        (0, "M004", "ON"), (8, "M004", "OFF"),
        (20, "M007", "ON"), (30, "M007", "OFF"),
        (45, "M006", "ON"), (75, "M006", "OFF"),
        (95, "M001", "ON"), (105, "M001", "OFF"),
    ]
    meal_preparation = [
        (0, "M016", "ON"), (15, "M016", "OFF"),
        (40, "M017", "ON"), (70, "M017", "OFF"),
        (90, "T003", "23.5"),
        (120, "M018", "ON"), (200, "M018", "OFF"),
        (260, "M015", "ON"), (270, "M015", "OFF"),
        (300, "M020", "ON"), (330, "M020", "OFF"),
        (370, "M021", "ON"), (420, "M021", "OFF"),
    ]
    wash_dishes = [
        (0, "M017", "ON"), (30, "M017", "OFF"),
        (60, "M016", "ON"), (120, "M016", "OFF"),
        (150, "M018", "ON"), (210, "M018", "OFF"),
        (260, "M020", "ON"), (280, "M020", "OFF"),
        (310, "M021", "ON"), (330, "M021", "OFF"),
    ]
    eating = [
        (0, "M016", "ON"), (20, "M016", "OFF"),
        (50, "M018", "ON"), (90, "M018", "OFF"),
        (130, "M020", "ON"), (250, "M020", "OFF"),
        (280, "M021", "ON"), (300, "M021", "OFF"),
        (330, "M017", "ON"), (380, "M017", "OFF"),
    ]
    work = (
        toggles(["M023", "M031", "M024"], step=400, hold=120)
        + [(1300, "T004", "22.0")]
        + [(1500 + d, s, v) for d, s, v in toggles(["M023", "M024"], step=500, hold=200)]
    )
    leave_home = [
        (0, "M009", "ON"), (6, "M009", "OFF"),
        (15, "M008", "ON"), (21, "M008", "OFF"),
        (30, "M027", "ON"), (36, "M027", "OFF"),
        (45, "D001", "OPEN"),
        (52, "M028", "ON"), (58, "M028", "OFF"),
        (66, "D001", "CLOSE"),
    ]
    enter_home = [
        (0, "D001", "OPEN"),
        (6, "M027", "ON"), (12, "M027", "OFF"),
        (20, "D001", "CLOSE"),
        (30, "M008", "ON"), (36, "M008", "OFF"),
        (45, "M009", "ON"), (55, "M009", "OFF"),
    ]
    relax = (
        toggles(["M009", "M010", "M012"], step=300, hold=60)
        + [(1000, "T002", "22.5")]
        + [(1200 + d, s, v) for d, s, v in toggles(["M013", "M014", "M011"], step=350, hold=90)]
    )
    housekeeping = toggles(
        ["M009", "M016", "M020", "M001", "M025", "M029", "M011"], step=180, hold=40
    )
    resperate = [
        (0, "M009", "ON"), (30, "M009", "OFF"),
        (60, "T002", "22.0"),
        (300, "M010", "ON"), (320, "M010", "OFF"),
    ]

    day_noise = [
        (0, "M014", "ON"), (10, "M014", "OFF"),
        (60, "T002", "21.0"),
        (120, "M022", "ON"), (130, "M022", "OFF"),
    ]

    for day in (1, 2, 3):
        base = datetime(2026, 6, day)
        b.instance("Sleeping", base + timedelta(minutes=10), sleeping)
        b.instance("Bed_to_Toilet", base + timedelta(hours=5, minutes=50), bed_to_toilet)
        b.instance("Meal_Preparation", base + timedelta(hours=6, minutes=30), meal_preparation)
        b.instance("Eating", base + timedelta(hours=7), eating)
        if day == 1:
            b.instance("Wash_Dishes", base + timedelta(hours=7, minutes=30), wash_dishes)
        b.noise(base + timedelta(hours=8, minutes=30), day_noise)
        b.instance("Work", base + timedelta(hours=9), work)
        b.instance("Leave_Home", base + timedelta(hours=11), leave_home)
        b.instance("Enter_Home", base + timedelta(hours=13), enter_home)
        b.instance("Relax", base + timedelta(hours=13, minutes=30), relax)
        if day in (1, 2):
            b.instance("Housekeeping", base + timedelta(hours=15), housekeeping)
        if day == 2:
            b.instance("Resperate", base + timedelta(hours=16), resperate)
        b.noise(base + timedelta(hours=17), day_noise)

    b.write(HERE / "aruba_sample.log")


def build_milan():
    b = LogBuilder(seed=70127)

    sleeping = [
        (0, "M020", "ON"), (40, "M020", "OFF"),
        (1800, "T002", "19.5"),
        (7200, "M021", "ON"), (7240, "M021", "OFF"),
        (12600, "M022", "ON"), (12650, "M022", "OFF"),
        (16200, "M020", "ON"), (16250, "M020", "OFF"),
    ]
    bed_to_toilet = [
        (0, "M020", "ON"), (8, "M020", "OFF"),
        (18, "M029", "ON"), (26, "M029", "OFF"),
        (40, "M018", "ON"), (50, "M018", "OFF"),
        (70, "M019", "ON"), (100, "M019", "OFF"),
        (120, "M029", "ON"), (128, "M029", "OFF"),
        (140, "M021", "ON"), (150, "M021", "OFF"),
    ]
    kitchen_activity = [
        (0, "M007", "ON"), (30, "M007", "OFF"),
        (60, "M009", "ON"), (120, "M009", "OFF"),
        (150, "D002", "OPEN"), (170, "D002", "CLOSE"),
        (200, "M010", "ON"), (260, "M010", "OFF"),
        (300, "M028", "ON"), (340, "M028", "OFF"),
        (380, "M008", "ON"), (420, "M008", "OFF"),
    ]
    dining_activity = toggles(["M005", "M006", "M012"], step=240, hold=80)
    take_medicine = [
        (0, "M007", "ON"), (20, "M007", "OFF"),
        (45, "M028", "ON"), (70, "M028", "OFF"),
        (95, "M010", "ON"), (110, "M010", "OFF"),
    ]
    desk_activity = toggles(["M016", "M017", "M016"], step=500, hold=180)
    guest_bathroom = [
        (0, "M015", "ON"), (8, "M015", "OFF"),
        (20, "M013", "ON"), (60, "M013", "OFF"),
        (90, "M014", "ON"), (240, "M014", "OFF"),
        (270, "M013", "ON"), (300, "M013", "OFF"),
        (320, "M015", "ON"), (330, "M015", "OFF"),
    ]
    read = (
        toggles(["M002", "M003", "M026"], step=420, hold=150)
        + [(1400, "T001", "21.5")]
    )
    leave_home = [
        (0, "M002", "ON"), (8, "M002", "OFF"),
        (20, "M027", "ON"), (28, "M027", "OFF"),
        (40, "D001", "OPEN"),
        (48, "M001", "ON"), (56, "M001", "OFF"),
        (66, "D001", "CLOSE"),
    ]
    master_bedroom = toggles(["M020", "M021", "M022", "M029"], step=200, hold=60)
    master_bathroom = toggles(["M018", "M019", "M018"], step=220, hold=90)
    meditate = [
        (0, "M023", "ON"), (120, "M023", "OFF"),
        (180, "M002", "ON"), (210, "M002", "OFF"),
        (260, "M005", "ON"), (290, "M005", "OFF"),
        (340, "M007", "ON"), (370, "M007", "OFF"),
        (430, "M024", "ON"), (500, "M024", "OFF"),
        (560, "M023", "ON"), (640, "M023", "OFF"),
    ]
    watch_tv = (
        toggles(["M004", "M002", "M004"], step=600, hold=240)
        + [(2000, "T001", "22.0")]
    )
    chores = toggles(["M002", "M007", "M020"], step=300, hold=60)

    day_noise = [
        (0, "M026", "ON"), (12, "M026", "OFF"),
        (90, "T001", "21.0"),
    ]

    for day in (1, 2, 3):
        base = datetime(2026, 6, day)
        sleep_label = "Sleep" if day == 1 else "Sleeping"
        b.instance(sleep_label, base + timedelta(minutes=5), sleeping)
        b.instance("Bed_to_Toilet", base + timedelta(hours=5, minutes=50), bed_to_toilet)
        b.instance("Kitchen_Activity", base + timedelta(hours=6, minutes=30), kitchen_activity)
        dining_label = "Dining_Rm_Activity" if day == 1 else "Dining_Activity"
        b.instance(dining_label, base + timedelta(hours=7, minutes=10), dining_activity)
        meds_label = {1: "Morning_Meds", 2: "Eve_Meds", 3: "Take_Medicine"}[day]
        b.instance(meds_label, base + timedelta(hours=7, minutes=40), take_medicine)
        b.instance("Desk_Activity", base + timedelta(hours=8), desk_activity)
        b.instance("Guest_Bathroom", base + timedelta(hours=9, minutes=30), guest_bathroom)
        b.instance("Read", base + timedelta(hours=10, minutes=30), read)
        b.instance("Leave_Home", base + timedelta(hours=11, minutes=30), leave_home)
        bedroom_label = "Master_Bedroom_Activity" if day == 1 else "Master_Bedroom"
        b.instance(bedroom_label, base + timedelta(hours=13), master_bedroom)
        b.instance("Master_Bathroom", base + timedelta(hours=14), master_bathroom)
        b.instance("Meditate", base + timedelta(hours=15), meditate)
        b.instance("Watch_TV", base + timedelta(hours=16), watch_tv)
        if day == 2:
            b.instance("Chores", base + timedelta(hours=17, minutes=30), chores)
        b.noise(base + timedelta(hours=18), day_noise)

    b.write(HERE / "milan_sample.log")


if __name__ == "__main__":
    build_aruba()
    build_milan()
    print("wrote", HERE / "aruba_sample.log")
    print("wrote", HERE / "milan_sample.log")
