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

#include "meshidx/xml.hpp"

#include <cctype>

namespace meshidx::xml {

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c == '-' || c == '.';
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp <= 0x7f) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7ff) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp <= 0xffff) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
      offset_(offset) {}

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

const Element* Element::child(std::string_view child_name) const {
  for (const Element& c : children) {
    if (c.name == child_name) {
      return &c;
    }
  }
  return nullptr;
}

const Element* Element::find(std::initializer_list<std::string_view> path) const {
  const Element* current = this;
  for (std::string_view step : path) {
    current = current->child(step);
    if (current == nullptr) {
      return nullptr;
    }
  }
  return current;
}

void Element::for_each_child(std::string_view child_name,
                             const std::function<void(const Element&)>& fn) const {
  for (const Element& c : children) {
    if (c.name == child_name) {
      fn(c);
    }
  }
}

std::string Element::deep_text() const {
  std::string out = text;
  for (const Element& c : children) {
    out += c.deep_text();
  }
  return out;
}

Cursor::Cursor(std::string_view xml) : xml_(xml) {}

char Cursor::peek(std::size_t ahead) const {
  std::size_t i = pos_ + ahead;
  return i < xml_.size() ? xml_[i] : '\0';
}

bool Cursor::starts_with(std::string_view prefix) const {
  return xml_.substr(pos_, prefix.size()) == prefix;
}

void Cursor::expect(char c) {
  if (pos_ >= xml_.size() || xml_[pos_] != c) {
    fail(std::string("expected '") + c + "'", pos_);
  }
  ++pos_;
}

void Cursor::skip_whitespace() {
  while (pos_ < xml_.size() &&
         std::isspace(static_cast<unsigned char>(xml_[pos_]))) {
    ++pos_;
  }
}

void Cursor::skip_until(std::string_view terminator, const char* what) {
  std::size_t found = xml_.find(terminator, pos_);
  if (found == std::string_view::npos) {
    fail(std::string("unterminated ") + what, pos_);
  }
  pos_ = found + terminator.size();
}

void Cursor::skip_doctype() {
  // "<!DOCTYPE" already recognized; an internal subset may nest '[' .. ']'.
  bool in_subset = false;
  while (pos_ < xml_.size()) {
    char c = xml_[pos_++];
    if (c == '[') {
      in_subset = true;
    } else if (c == ']') {
      in_subset = false;
    } else if (c == '>' && !in_subset) {
      return;
    }
  }
  fail("unterminated DOCTYPE declaration", pos_);
}

bool Cursor::skip_misc() {
  if (starts_with("<!--")) {
    std::size_t at = pos_;
    pos_ += 4;
    std::size_t found = xml_.find("-->", pos_);
    if (found == std::string_view::npos) {
      fail("unterminated comment", at);
    }
    pos_ = found + 3;
    return true;
  }
  if (starts_with("<?")) {
    std::size_t at = pos_;
    pos_ += 2;
    std::size_t found = xml_.find("?>", pos_);
    if (found == std::string_view::npos) {
      fail("unterminated processing instruction", at);
    }
    pos_ = found + 2;
    return true;
  }
  if (starts_with("<!DOCTYPE")) {
    pos_ += 9;
    skip_doctype();
    return true;
  }
  return false;
}

std::string Cursor::read_name() {
  if (pos_ >= xml_.size() || !is_name_start(xml_[pos_])) {
    fail("expected a name", pos_);
  }
  std::size_t begin = pos_;
  while (pos_ < xml_.size() && is_name_char(xml_[pos_])) {
    ++pos_;
  }
  return std::string(xml_.substr(begin, pos_ - begin));
}

void Cursor::append_entity(std::string& out, std::size_t& i) const {
  // i points at '&'; advances past the terminating ';'.
  std::size_t semi = xml_.find(';', i + 1);
  if (semi == std::string_view::npos || semi - i > 12) {
    fail("malformed entity reference", i);
  }
  std::string_view body = xml_.substr(i + 1, semi - i - 1);
  if (body == "lt") {
    out.push_back('<');
  } else if (body == "gt") {
    out.push_back('>');
  } else if (body == "amp") {
    out.push_back('&');
  } else if (body == "apos") {
    out.push_back('\'');
  } else if (body == "quot") {
    out.push_back('"');
  } else if (!body.empty() && body[0] == '#') {
    bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
    std::string_view digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) {
      fail("empty character reference", i);
    }
    unsigned long cp = 0;
    for (char c : digits) {
      int v;
      if (c >= '0' && c <= '9') {
        v = c - '0';
      } else if (hex && c >= 'a' && c <= 'f') {
        v = c - 'a' + 10;
      } else if (hex && c >= 'A' && c <= 'F') {
        v = c - 'A' + 10;
      } else {
        fail("malformed character reference", i);
      }
      cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(v);
      if (cp > 0x10ffff) {
        fail("character reference out of range", i);
      }
    }
    append_utf8(out, cp);
  } else {
    fail("unknown entity '&" + std::string(body) + ";'", i);
  }
  i = semi + 1;
}

std::string Cursor::decode_text(std::size_t begin, std::size_t end) const {
  std::string out;
  out.reserve(end - begin);
  std::size_t i = begin;
  while (i < end) {
    char c = xml_[i];
    if (c == '&') {
      append_entity(out, i);
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

std::string Cursor::read_attribute_value() {
  if (pos_ >= xml_.size() || (xml_[pos_] != '"' && xml_[pos_] != '\'')) {
    fail("expected a quoted attribute value", pos_);
  }
  char quote = xml_[pos_++];
  std::size_t begin = pos_;
  std::size_t found = xml_.find(quote, pos_);
  if (found == std::string_view::npos) {
    fail("unterminated attribute value", begin - 1);
  }
  pos_ = found + 1;
  return decode_text(begin, found);
}

void Cursor::parse_tag_header(Element& out, bool& self_closing) {
  expect('<');
  out.name = read_name();
  for (;;) {
    skip_whitespace();
    if (pos_ >= xml_.size()) {
      fail("unterminated start tag", pos_);
    }
    if (xml_[pos_] == '>') {
      ++pos_;
      self_closing = false;
      return;
    }
    if (starts_with("/>")) {
      pos_ += 2;
      self_closing = true;
      return;
    }
    std::string key = read_name();
    skip_whitespace();
    expect('=');
    skip_whitespace();
    out.attributes.emplace_back(std::move(key), read_attribute_value());
  }
}

void Cursor::parse_content(Element& out) {
  for (;;) {
    std::size_t text_begin = pos_;
    while (pos_ < xml_.size() && xml_[pos_] != '<') {
      ++pos_;
    }
    if (pos_ > text_begin) {
      out.text += decode_text(text_begin, pos_);
    }
    if (pos_ >= xml_.size()) {
      fail("unterminated element <" + out.name + ">", pos_);
    }
    if (starts_with("<![CDATA[")) {
      std::size_t at = pos_;
      pos_ += 9;
      std::size_t found = xml_.find("]]>", pos_);
      if (found == std::string_view::npos) {
        fail("unterminated CDATA section", at);
      }
      out.text.append(xml_.substr(pos_, found - pos_));
      pos_ = found + 3;
      continue;
    }
    if (skip_misc()) {
      continue;
    }
    if (starts_with("</")) {
      pos_ += 2;
      std::size_t at = pos_;
      std::string closing = read_name();
      if (closing != out.name) {
        fail("mismatched end tag </" + closing + "> for <" + out.name + ">", at);
      }
      skip_whitespace();
      expect('>');
      return;
    }
    out.children.push_back(parse_element());
  }
}

Element Cursor::parse_element() {
  Element element;
  bool self_closing = false;
  parse_tag_header(element, self_closing);
  if (!self_closing) {
    parse_content(element);
  }
  return element;
}

bool Cursor::seek(std::string_view element_name) {
  while (pos_ < xml_.size()) {
    std::size_t lt = xml_.find('<', pos_);
    if (lt == std::string_view::npos) {
      pos_ = xml_.size();
      return false;
    }
    pos_ = lt;
    if (starts_with("<![CDATA[")) {
      pos_ += 9;
      skip_until("]]>", "CDATA section");
      continue;
    }
    if (skip_misc()) {
      continue;
    }
    if (starts_with("</")) {
      pos_ += 2;
      read_name();
      skip_whitespace();
      expect('>');
      continue;
    }
    // A start tag; check the name, then either stop or skip its header.
    std::size_t tag_start = pos_;
    ++pos_;
    std::string name = read_name();
    if (name == element_name) {
      pos_ = tag_start;
      return true;
    }
    // Skip to the closing '>' of this tag, honoring quoted attribute values.
    char quote = '\0';
    while (pos_ < xml_.size()) {
      char c = xml_[pos_++];
      if (quote != '\0') {
        if (c == quote) {
          quote = '\0';
        }
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      }
    }
  }
  return false;
}

[[noreturn]] void Cursor::fail(const std::string& message, std::size_t at) const {
  throw ParseError(message, at);
}

Element parse_document(std::string_view xml) {
  Cursor cursor(xml);
  cursor.skip_whitespace();
  while (cursor.skip_misc()) {
    cursor.skip_whitespace();
  }
  if (cursor.pos_ >= xml.size() || cursor.peek() != '<') {
    throw ParseError("document has no root element", cursor.pos_);
  }
  Element root = cursor.parse_element();
  cursor.skip_whitespace();
  while (cursor.skip_misc()) {
    cursor.skip_whitespace();
  }
  if (cursor.pos_ != xml.size()) {
    throw ParseError("trailing content after root element", cursor.pos_);
  }
  return root;
}

}  // namespace meshidx::xml
