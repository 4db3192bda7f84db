# Copyright 2026 The clab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Random Exact Cover instances with exactly one satisfying assignment.

Clauses are drawn uniformly and kept only if at least one assignment still
satisfies every clause; drawing stops once a single assignment remains.
Usage: gen_instances.py N SEED OUT.json
"""

import itertools
import json
import random
import sys


def satisfying(n, clauses):
    out = []
    for z in range(1 << n):
        bits = [(z >> (n - i)) & 1 for i in range(1, n + 1)]
        if all(bits[i - 1] + bits[j - 1] + bits[k - 1] == 1 for i, j, k in clauses):
            out.append(z)
    return out


def generate(n, seed):
    rng = random.Random(seed)
    triples = list(itertools.combinations(range(1, n + 1), 3))
    while True:
        clauses = []
        pool = triples[:]
        rng.shuffle(pool)
        for t in pool:
            trial = clauses + [list(t)]
            sols = satisfying(n, trial)
            if not sols:
                continue
            clauses = trial
            if len(sols) == 1:
                return {"n": n, "clauses": sorted(clauses)}


def main():
    n, seed, out = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
    inst = generate(n, seed)
    with open(out, "w") as f:
        json.dump(inst, f)
        f.write("\n")
    sol = satisfying(n, inst["clauses"])[0]
    print(out, len(inst["clauses"]), "clauses, solution", format(sol, "0%db" % n))


if __name__ == "__main__":
    main()
