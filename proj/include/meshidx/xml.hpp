/*
 * Copyright 2026 The meshidx Authors
 *
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

#ifndef MESHIDX_XML_HPP
#define MESHIDX_XML_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meshidx::xml {

/// Raised on malformed input; `offset` is the byte position of the problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A parsed element. `text` holds character data appearing directly inside
/// the element; markup found between text runs is parsed into `children`.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;

  const std::string* attribute(std::string_view key) const;
  const Element* child(std::string_view child_name) const;
  /// Descends through the first child of each successive name; nullptr if
  /// any step is missing.
  const Element* find(std::initializer_list<std::string_view> path) const;
  void for_each_child(std::string_view child_name,
                      const std::function<void(const Element&)>& fn) const;
  /// All character data in the subtree, in document order.
  std::string deep_text() const;
};

/// Forward-only scanner over an XML byte buffer. Intended use: `seek` to the
/// next start tag of interest, then `parse_element` to materialize just that
/// subtree. This keeps memory bounded when iterating record elements in
/// multi-megabyte corpus files.
class Cursor {
 public:
  explicit Cursor(std::string_view xml);

  /// Scans forward to the next start tag with the given name (any depth).
  /// On success the cursor is positioned at its '<'.
  bool seek(std::string_view element_name);

  /// Parses the element starting at the current position.
  Element parse_element();

  std::size_t offset() const { return pos_; }

 private:
  friend Element parse_document(std::string_view xml);

  char peek(std::size_t ahead = 0) const;
  bool starts_with(std::string_view prefix) const;
  void expect(char c);
  void skip_whitespace();
  /// Skips comments, processing instructions and DOCTYPE declarations.
  bool skip_misc();
  void skip_until(std::string_view terminator, const char* what);
  void skip_doctype();
  std::string read_name();
  std::string read_attribute_value();
  void parse_tag_header(Element& out, bool& self_closing);
  void parse_content(Element& out);
  std::string decode_text(std::size_t begin, std::size_t end) const;
  void append_entity(std::string& out, std::size_t& i) const;
  [[noreturn]] void fail(const std::string& message, std::size_t at) const;

  std::string_view xml_;
  std::size_t pos_ = 0;
};

/// Parses a complete document and returns its root element.
Element parse_document(std::string_view xml);

}  // namespace meshidx::xml

#endif  // MESHIDX_XML_HPP
