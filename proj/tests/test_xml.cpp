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

#include <doctest.h>

#include <string>
#include <vector>

#include "meshidx/xml.hpp"

using meshidx::xml::Cursor;
using meshidx::xml::Element;
using meshidx::xml::ParseError;
using meshidx::xml::parse_document;

TEST_CASE("parses elements, attributes and nested text") {
  Element root = parse_document(
      "<?xml version=\"1.0\"?><!DOCTYPE a SYSTEM \"a.dtd\">"
      "<a id=\"r1\"><b>hello <i>world</i></b><c/></a>");
  CHECK(root.name == "a");
  REQUIRE(root.attribute("id") != nullptr);
  CHECK(*root.attribute("id") == "r1");
  REQUIRE(root.child("b") != nullptr);
  CHECK(root.child("b")->deep_text() == "hello world");
  CHECK(root.child("c") != nullptr);
  CHECK(root.attribute("missing") == nullptr);
}

TEST_CASE("decodes entities and character references") {
  Element root = parse_document("<t a=\"x&amp;y\">&lt;2 &#65;&#x42;&quot;</t>");
  CHECK(*root.attribute("a") == "x&y");
  CHECK(root.text == "<2 AB\"");
}

TEST_CASE("CDATA passes through verbatim") {
  Element root = parse_document("<t><![CDATA[a < b & c]]></t>");
  CHECK(root.text == "a < b & c");
}

TEST_CASE("comments and processing instructions are skipped") {
  Element root = parse_document("<t><!-- no --><?pi data?>x</t>");
  CHECK(root.text == "x");
  CHECK(root.children.empty());
}

TEST_CASE("malformed input reports a byte offset") {
  const std::string bad = "<a><b></a>";
  try {
    parse_document(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 8);  // the 'a' of the mismatched end tag
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_document("<a>unterminated"), ParseError);
  CHECK_THROWS_AS(parse_document("<a>&bogus;</a>"), ParseError);
  CHECK_THROWS_AS(parse_document("no markup at all"), ParseError);
  CHECK_THROWS_AS(parse_document("<a></a><b></b>"), ParseError);
}

TEST_CASE("cursor seeks records without materializing siblings") {
  const std::string xml =
      "<set><!-- skip --><rec id='1'><v>a</v></rec>"
      "<other><rec id='2'><v>b</v></rec></other>"
      "<rec id='3'><v>c &amp; d</v></rec></set>";
  Cursor cursor(xml);
  std::vector<std::string> values;
  while (cursor.seek("rec")) {
    Element rec = cursor.parse_element();
    values.push_back(rec.child("v")->text);
  }
  REQUIRE(values.size() == 3);
  CHECK(values[0] == "a");
  CHECK(values[1] == "b");
  CHECK(values[2] == "c & d");
}

TEST_CASE("find descends through first matching children") {
  Element root = parse_document("<a><b><c>deep</c></b><b><c>other</c></b></a>");
  const Element* c = root.find({"b", "c"});
  REQUIRE(c != nullptr);
  CHECK(c->text == "deep");
  CHECK(root.find({"b", "missing"}) == nullptr);
}
