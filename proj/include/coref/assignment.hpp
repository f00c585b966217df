// Copyright 2026 The uacoref Authors.
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

#ifndef UACOREF_ASSIGNMENT_HPP_
#define UACOREF_ASSIGNMENT_HPP_

#include <vector>

namespace coref {

// Maximum-score one-to-one assignment of rows to columns (Kuhn-Munkres with
// potentials, O(n^3)). `score` is row-major, rows x cols, rectangular
// allowed; unassigned rows (when rows > cols) get -1. Returns the total
// score of the optimal assignment.
double max_assignment(const std::vector<double>& score, int rows, int cols,
                      std::vector<int>* row_to_col = nullptr);

}  // namespace coref

#endif  // UACOREF_ASSIGNMENT_HPP_
