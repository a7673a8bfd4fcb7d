/*
 * Copyright 2026 The splitrule Authors.
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

#ifndef SPLITRULE_CORE_CSV_HPP_
#define SPLITRULE_CORE_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace splitrule::csv {

using Record = std::vector<std::string>;

// RFC-4180 parsing: quoted fields may hold separators, doubled quotes and line
// breaks. Accepts LF or CRLF record ends and a leading UTF-8 BOM. A trailing
// empty line is not a record.
std::vector<Record> parse(std::string_view text);

std::string read_file(const std::string& path);

// Quotes a field only when it needs quoting.
std::string escape(std::string_view field);

std::string format_record(const Record& record);

}  // namespace splitrule::csv

#endif  // SPLITRULE_CORE_CSV_HPP_
