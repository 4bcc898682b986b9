// Copyright 2026 The metaformer-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef METAFORMER__SELFTEST_HPP_
#define METAFORMER__SELFTEST_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace metaformer
{

struct CheckResult
{
  std::string name;
  bool passed = false;
  std::string detail;

  /// "PASS name: detail" or "FAIL name: detail"
  std::string line() const;
};

struct SelftestOptions
{
  std::size_t moment_samples = 10'000'000;
  std::uint64_t seed = 0;
  std::size_t gradcheck_points = 1000;
};

inline constexpr double kParamTolerance = 0.01;
inline constexpr double kMacTolerance = 0.03;
inline constexpr double kGradcheckTolerance = 1e-3;

std::vector<CheckResult> check_moments(const SelftestOptions & options);
std::vector<CheckResult> check_gradients(const SelftestOptions & options);
std::vector<CheckResult> check_round_trip(const SelftestOptions & options);
/// Params within 1% and MACs within 3% of the published figures for every named model.
std::vector<CheckResult> check_size_tables();

std::vector<CheckResult> run_selftest(const SelftestOptions & options = {});

}  // namespace metaformer

#endif  // METAFORMER__SELFTEST_HPP_
