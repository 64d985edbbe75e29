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

#ifndef PDD_RDF_H_
#define PDD_RDF_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace pdd {

// An absolute IRI. Construction validates: a scheme followed by ':' and no
// characters that N-Triples forbids inside <...>.
class Iri {
 public:
  // Throws DataError when |value| is not an absolute IRI.
  explicit Iri(std::string value);

  const std::string &value() const { return value_; }

  auto operator<=>(const Iri &other) const = default;
  bool operator==(const Iri &other) const = default;

 private:
  std::string value_;
};

struct Literal {
  std::string lexical;
  std::optional<Iri> datatype;

  auto operator<=>(const Literal &other) const = default;
  bool operator==(const Literal &other) const = default;
};

using Term = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  auto operator<=>(const Triple &other) const = default;
  bool operator==(const Triple &other) const = default;
};

bool IsValidIri(std::string_view value);

// Percent-encodes every byte outside the RFC 3986 unreserved set
// (A-Z a-z 0-9 - . _ ~) as %XX with uppercase hex. Throws DataError on an
// empty string or invalid UTF-8.
std::string PercentEncode(std::string_view text);

inline constexpr std::string_view kOwlSameAs = "http://www.w3.org/2002/07/owl#sameAs";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

}  // namespace pdd

#endif  // PDD_RDF_H_
