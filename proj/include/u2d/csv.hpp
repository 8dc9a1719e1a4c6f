// Copyright 2026 The u2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace u2d {

// Rows of already formatted cells; the first row is the header.
using CsvTable = std::vector<std::vector<std::string>>;

std::string format_double(double v);

std::string to_csv(const CsvTable& table);

// Writes to a sibling temp file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace u2d
