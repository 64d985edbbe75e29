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

#include "pdd/ntriples.h"

#include <cstdint>

#include "pdd/errors.h"

namespace pdd {

namespace {

void AppendUtf8(uint32_t code, std::string *out) {
  if (code < 0x80) {
    out->push_back(static_cast<char>(code));
  } else if (code < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (code >> 6)));
    out->push_back(static_cast<char>(0x80 | (code & 0x3F)));
  } else if (code < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (code >> 12)));
    out->push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (code & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (code >> 18)));
    out->push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (code & 0x3F)));
  }
}

class LineParser {
 public:
  explicit LineParser(std::string_view line) : line_(line) {}

  Triple Parse() {
    SkipSpace();
    Iri subject = ParseIriRef();
    SkipSpace();
    Iri predicate = ParseIriRef();
    SkipSpace();
    Term object = Peek() == '"' ? Term(ParseLiteral()) : Term(ParseIriRef());
    SkipSpace();
    Expect('.');
    SkipSpace();
    if (pos_ < line_.size() && line_[pos_] != '#') Fail("trailing characters");
    return Triple{std::move(subject), std::move(predicate), std::move(object)};
  }

 private:
  char Peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

  [[noreturn]] void Fail(const std::string &what) const {
    throw DataError("N-Triples: " + what + " at column " + std::to_string(pos_ + 1) + " in '" +
                    std::string(line_) + "'");
  }

  void SkipSpace() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  void Expect(char c) {
    if (Peek() != c) Fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  uint32_t ParseHex(int digits) {
    uint32_t code = 0;
    for (int i = 0; i < digits; ++i) {
      char c = Peek();
      int value;
      if (c >= '0' && c <= '9') {
        value = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        value = c - 'a' + 10;
      } else if (c >= 'A' && c <= 'F') {
        value = c - 'A' + 10;
      } else {
        Fail("bad hex digit");
      }
      code = code * 16 + value;
      ++pos_;
    }
    return code;
  }

  // After a backslash: \uXXXX or \UXXXXXXXX.
  void ParseUchar(std::string *out) {
    char kind = Peek();
    ++pos_;
    if (kind == 'u') {
      AppendUtf8(ParseHex(4), out);
    } else if (kind == 'U') {
      AppendUtf8(ParseHex(8), out);
    } else {
      Fail("bad escape");
    }
  }

  Iri ParseIriRef() {
    if (Peek() == '_') Fail("blank nodes are not supported");
    Expect('<');
    std::string value;
    while (true) {
      if (pos_ >= line_.size()) Fail("unterminated IRI");
      char c = line_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        ParseUchar(&value);
      } else {
        value.push_back(c);
      }
    }
    if (!IsValidIri(value)) Fail("invalid IRI");
    return Iri(std::move(value));
  }

  Literal ParseLiteral() {
    Expect('"');
    Literal literal;
    while (true) {
      if (pos_ >= line_.size()) Fail("unterminated literal");
      char c = line_[pos_++];
      if (c == '"') break;
      if (c == '\n' || c == '\r') Fail("raw line break in literal");
      if (c != '\\') {
        literal.lexical.push_back(c);
        continue;
      }
      char e = Peek();
      switch (e) {
        case 't': literal.lexical.push_back('\t'); ++pos_; break;
        case 'b': literal.lexical.push_back('\b'); ++pos_; break;
        case 'n': literal.lexical.push_back('\n'); ++pos_; break;
        case 'r': literal.lexical.push_back('\r'); ++pos_; break;
        case 'f': literal.lexical.push_back('\f'); ++pos_; break;
        case '"': literal.lexical.push_back('"'); ++pos_; break;
        case '\'': literal.lexical.push_back('\''); ++pos_; break;
        case '\\': literal.lexical.push_back('\\'); ++pos_; break;
        default: ParseUchar(&literal.lexical); break;
      }
    }
    if (Peek() == '@') Fail("language tags are not supported");
    if (Peek() == '^') {
      ++pos_;
      Expect('^');
      literal.datatype = ParseIriRef();
    }
    return literal;
  }

  std::string_view line_;
  size_t pos_ = 0;
};

}  // namespace

std::string FormatIri(const Iri &iri) { return "<" + iri.value() + ">"; }

std::string FormatTerm(const Term &term) {
  if (const Iri *iri = std::get_if<Iri>(&term)) return FormatIri(*iri);
  const Literal &literal = std::get<Literal>(term);
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out = "\"";
  for (unsigned char c : literal.lexical) {
    switch (c) {
      case '\b': out += "\\b"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\f': out += "\\f"; break;
      case '\r': out += "\\r"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          out += "\\u00";
          out.push_back(kHex[c >> 4]);
          out.push_back(kHex[c & 0xF]);
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
  if (literal.datatype) out += "^^" + FormatIri(*literal.datatype);
  return out;
}

std::string FormatTriple(const Triple &triple) {
  return FormatIri(triple.subject) + " " + FormatIri(triple.predicate) + " " +
         FormatTerm(triple.object) + " .";
}

Triple ParseTripleLine(std::string_view line) { return LineParser(line).Parse(); }

std::vector<Triple> ParseNTriples(std::istream &in) {
  std::vector<Triple> triples;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    triples.push_back(ParseTripleLine(line));
  }
  return triples;
}

}  // namespace pdd
