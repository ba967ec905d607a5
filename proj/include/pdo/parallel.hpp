// Copyright 2026 The pdo Authors.
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

#ifndef PDO_PARALLEL_HPP_
#define PDO_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace pdo {

// Worker count used by parallel_for. Defaults to 1.
void set_num_threads(int k);
int num_threads();

// Runs fn(i) for i in [begin, end) split into contiguous slabs, one per
// worker. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace pdo

#endif  // PDO_PARALLEL_HPP_
