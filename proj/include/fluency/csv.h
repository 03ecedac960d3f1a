/* Copyright 2026 The Fluency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FLUENCY_CSV_H_
#define FLUENCY_CSV_H_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fluency::csv {

using Row = std::vector<std::string>;

// Shortest decimal text that parses back to exactly `value` ('.' decimal,
// locale independent).
std::string FormatDouble(double value);

// Parses a double written by FormatDouble (or any plain decimal). Throws
// std::invalid_argument on trailing garbage.
double ParseDouble(std::string_view text);

// RFC-4180 quoting: fields containing ',', '"', CR or LF are quoted with
// embedded quotes doubled.
std::string EscapeField(std::string_view field);

void WriteRow(std::ostream& out, const Row& row);

// Parses RFC-4180 text. Accepts LF or CRLF line endings. Lines whose first
// character is '#' (outside quotes) are skipped when `skip_comments` is set.
// A trailing newline does not produce an empty row; blank lines are dropped.
std::vector<Row> Parse(std::string_view text, bool skip_comments = true);

}  // namespace fluency::csv

#endif  // FLUENCY_CSV_H_
