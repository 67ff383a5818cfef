/*
 * Copyright 2026 The embrec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EMBREC_SRC_OUTPUT_H_
#define EMBREC_SRC_OUTPUT_H_

#include <filesystem>
#include <fstream>
#include <system_error>

namespace embrec::internal {

// Binary output stream; missing parent directories are created first. Callers
// check the stream state.
inline std::ofstream OpenOutput(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ignored;
    std::filesystem::create_directories(path.parent_path(), ignored);
  }
  return std::ofstream(path, std::ios::binary);
}

}  // namespace embrec::internal

#endif  // EMBREC_SRC_OUTPUT_H_
