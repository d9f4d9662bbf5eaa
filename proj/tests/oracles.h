// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ITN_TESTS_ORACLES_H_
#define ITN_TESTS_ORACLES_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "itn/rng.h"

namespace itn_test {

// Independent edit-distance oracle: top-down recursion with memoization,
// deliberately not sharing code with the library's DP.
inline size_t OracleEditDistance(const std::u32string& a,
                                 const std::u32string& b) {
  const size_t n = a.size();
  const size_t m = b.size();
  std::vector<long> memo((n + 1) * (m + 1), -1);
  std::function<size_t(size_t, size_t)> go = [&](size_t i,
                                                 size_t j) -> size_t {
    long& slot = memo[i * (m + 1) + j];
    if (slot >= 0) return static_cast<size_t>(slot);
    size_t result;
    if (i == n) {
      result = m - j;
    } else if (j == m) {
      result = n - i;
    } else {
      size_t with_pair = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
      size_t drop_a = go(i + 1, j) + 1;
      size_t drop_b = go(i, j + 1) + 1;
      result = with_pair;
      if (drop_a < result) result = drop_a;
      if (drop_b < result) result = drop_b;
    }
    slot = static_cast<long>(result);
    return result;
  };
  return go(0, 0);
}

// All strings over `alphabet` with length <= max_len, shortest first.
inline std::vector<std::u32string> AllStrings(const std::u32string& alphabet,
                                              size_t max_len) {
  std::vector<std::u32string> out{U""};
  size_t level_begin = 0;
  for (size_t len = 1; len <= max_len; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i) {
      for (char32_t c : alphabet) {
        out.push_back(out[i] + c);
      }
    }
    level_begin = level_end;
  }
  return out;
}

inline std::u32string RandomString(itn::SplitMix64& rng,
                                   const std::u32string& alphabet,
                                   size_t max_len) {
  std::u32string out;
  size_t len = rng.Uniform(max_len + 1);
  for (size_t i = 0; i < len; ++i) {
    out.push_back(alphabet[rng.Uniform(alphabet.size())]);
  }
  return out;
}

}  // namespace itn_test

#endif  // ITN_TESTS_ORACLES_H_
