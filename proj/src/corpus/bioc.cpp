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

#include "meshidx/corpus/bioc.hpp"

#include <array>
#include <optional>
#include <string>

#include "meshidx/gzip.hpp"
#include "meshidx/util.hpp"
#include "meshidx/xml.hpp"

namespace meshidx::corpus {

namespace {

std::optional<Section> section_for_type(std::string_view section_type) {
  if (section_type == "TITLE") return Section::kTitle;
  if (section_type == "ABSTRACT") return Section::kAbstract;
  if (section_type == "INTRO") return Section::kIntro;
  if (section_type == "METHODS") return Section::kMethods;
  if (section_type == "RESULTS") return Section::kResults;
  if (section_type == "DISCUSS") return Section::kDiscuss;
  if (section_type == "FIG") return Section::kFigCaptions;
  if (section_type == "TABLE") return Section::kTableCaptions;
  return std::nullopt;
}

const std::string* infon_value(const xml::Element& parent, std::string_view key) {
  const std::string* found = nullptr;
  parent.for_each_child("infon", [&](const xml::Element& infon) {
    if (found != nullptr) {
      return;
    }
    const std::string* k = infon.attribute("key");
    if (k != nullptr && *k == key) {
      found = &infon.text;
    }
  });
  return found;
}

FullTextSections document_to_sections(const xml::Element& document) {
  FullTextSections out;

  const std::string* pmid_infon = infon_value(document, "article-id_pmid");
  if (pmid_infon != nullptr) {
    out.pmid = normalize_text(*pmid_infon);
  } else if (const xml::Element* id = document.child("id")) {
    out.pmid = normalize_text(id->deep_text());
  }
  if (out.pmid.empty()) {
    throw SchemaError("BioC document has no id");
  }

  std::array<std::string, kSectionCount> joined;
  document.for_each_child("passage", [&](const xml::Element& passage) {
    const std::string* type = infon_value(passage, "section_type");
    if (type == nullptr) {
      return;
    }
    std::optional<Section> slot = section_for_type(*type);
    if (!slot) {
      return;
    }
    const xml::Element* text = passage.child("text");
    if (text == nullptr) {
      return;
    }
    std::string normalized = normalize_text(text->deep_text());
    if (normalized.empty()) {
      return;
    }
    std::string& target = joined[static_cast<std::size_t>(*slot)];
    if (!target.empty()) {
      target.push_back(' ');
    }
    target += normalized;
  });

  for (int s = 0; s < kSectionCount; ++s) {
    if (!joined[static_cast<std::size_t>(s)].empty()) {
      out.sections[static_cast<std::size_t>(s)] =
          std::move(joined[static_cast<std::size_t>(s)]);
    }
  }
  if (!out.has(Section::kTitle)) {
    throw SchemaError("BioC document " + out.pmid + " has no TITLE passage");
  }
  return out;
}

}  // namespace

FullTextSections parse_bioc_article(std::string_view xml_text) {
  xml::Element root = xml::parse_document(xml_text);
  const xml::Element* document = &root;
  if (root.name == "collection") {
    document = root.child("document");
    if (document == nullptr) {
      throw SchemaError("BioC collection has no document");
    }
  } else if (root.name != "document") {
    throw SchemaError("expected a BioC <collection> or <document> root, got <" +
                      root.name + ">");
  }
  return document_to_sections(*document);
}

std::size_t stream_bioc_documents(std::string_view xml_text,
                                  const std::function<void(FullTextSections)>& sink) {
  xml::Cursor cursor(xml_text);
  std::size_t count = 0;
  while (cursor.seek("document")) {
    sink(document_to_sections(cursor.parse_element()));
    ++count;
  }
  return count;
}

std::size_t stream_bioc_file(const std::filesystem::path& path,
                             const std::function<void(FullTextSections)>& sink) {
  std::string bytes = read_file_maybe_gzip(path);
  return stream_bioc_documents(bytes, sink);
}

}  // namespace meshidx::corpus
