// Copyright 2026 The pdd Authors.
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

#ifndef PDD_NTRIPLES_H_
#define PDD_NTRIPLES_H_

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "pdd/rdf.h"

namespace pdd {

// Canonical N-Triples term forms. Literals escape \b \t \n \f \r " and \ with
// backslash escapes and other control characters as \u00XX; everything else
// is written as raw UTF-8.
std::string FormatIri(const Iri &iri);
std::string FormatTerm(const Term &term);

// "<s> <p> o ." without a line terminator.
std::string FormatTriple(const Triple &triple);

// Parses one N-Triples statement. Blank nodes and language tags are not
// supported. Throws DataError on malformed input.
Triple ParseTripleLine(std::string_view line);

// Parses a whole document, skipping blank and comment lines.
std::vector<Triple> ParseNTriples(std::istream &in);

}  // namespace pdd

#endif  // PDD_NTRIPLES_H_
