#!/usr/bin/env python3
# Copyright 2026 The ctrnet Authors. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent feature tally for a click log.

Usage: tally.py LOG THRESHOLD COUNTS_OUT KEPT_OUT
Writes sorted `ns^feature<TAB>count` lines for every feature and for the
features whose count reaches THRESHOLD.
"""
import collections
import sys


def tally(path):
    counts = collections.Counter()
    with open(path, encoding="utf-8") as f:
        for line in f:
            body = line.rstrip("\n").split("#", 1)[0]
            ns = None
            for tok in body.split()[2:]:
                if tok.startswith("|"):
                    ns = tok[1:]
                else:
                    counts[ns + "^" + tok] += 1
    return counts


def dump(path, counts):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for key in sorted(counts):
            f.write(f"{key}\t{counts[key]}\n")


def main():
    log, threshold, counts_out, kept_out = sys.argv[1:5]
    counts = tally(log)
    dump(counts_out, counts)
    dump(kept_out, {k: v for k, v in counts.items() if v >= int(threshold)})


if __name__ == "__main__":
    main()
