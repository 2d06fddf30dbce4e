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

#include "meshidx/corpus/record.hpp"

#include <json.hpp>

#include <cctype>

namespace meshidx::corpus {

namespace {

constexpr std::string_view kNone = "None";

void append_json_string(std::string& out, std::string_view value) {
  static const char* hex = "0123456789abcdef";
  out.push_back('"');
  for (unsigned char c : value) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\b':
        out += "\\b";
        break;
      case '\f':
        out += "\\f";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out.push_back(hex[c >> 4]);
          out.push_back(hex[c & 0xf]);
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

void append_key(std::string& out, std::string_view key, bool first = false) {
  if (!first) {
    out.push_back(',');
  }
  append_json_string(out, key);
  out.push_back(':');
}

void append_string_list(std::string& out, const std::vector<std::string>& items) {
  out.push_back('[');
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) {
      out.push_back(',');
    }
    append_json_string(out, items[i]);
  }
  out.push_back(']');
}

void append_list_or_none(std::string& out, const std::vector<std::string>& items) {
  if (items.empty()) {
    append_json_string(out, kNone);
  } else {
    append_string_list(out, items);
  }
}

bool is_descriptor_ui(std::string_view ui) {
  if (ui.size() < 2 || ui[0] != 'D') {
    return false;
  }
  for (char c : ui.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

using Json = nlohmann::json;

const Json& require_key(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError("record missing key '" + std::string(key) + "'");
  }
  return *it;
}

std::string require_string(const Json& obj, std::string_view key) {
  const Json& v = require_key(obj, key);
  if (!v.is_string()) {
    throw SchemaError("record key '" + std::string(key) + "' must be a string");
  }
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json& obj, std::string_view key) {
  std::string v = require_string(obj, key);
  if (v == kNone) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string> string_list_or_none(const Json& obj, std::string_view key) {
  const Json& v = require_key(obj, key);
  if (v.is_string()) {
    if (v.get<std::string>() != kNone) {
      throw SchemaError("record key '" + std::string(key) +
                        "' must be a list or \"None\"");
    }
    return {};
  }
  if (!v.is_array()) {
    throw SchemaError("record key '" + std::string(key) +
                      "' must be a list or \"None\"");
  }
  std::vector<std::string> out;
  for (const Json& item : v) {
    if (!item.is_string()) {
      throw SchemaError("record key '" + std::string(key) +
                        "' has a non-string entry");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view to_string(IndexingMode mode) {
  switch (mode) {
    case IndexingMode::kHuman:
      return "human";
    case IndexingMode::kCurated:
      return "curated";
    case IndexingMode::kAuto:
      return "auto";
  }
  return "human";
}

void validate_record(const ArticleRecord& record) {
  if (record.citation.pmid.empty()) {
    throw SchemaError("record has an empty PMID");
  }
  if (record.sections.pmid != record.citation.pmid) {
    throw SchemaError("record PMID mismatch: sections '" + record.sections.pmid +
                      "' vs citation '" + record.citation.pmid + "'");
  }
}

std::string emit_record(const ArticleRecord& record) {
  validate_record(record);
  const FullTextSections& ft = record.sections;
  const CitationMetadata& c = record.citation;

  std::string out;
  out.reserve(512);
  out.push_back('{');
  append_key(out, "PMID", /*first=*/true);
  append_json_string(out, c.pmid);
  for (int s = 0; s < kSectionCount; ++s) {
    append_key(out, kSectionKeys[static_cast<std::size_t>(s)]);
    append_json_string(out, ft.sections[static_cast<std::size_t>(s)]
                                .value_or(std::string(kNone)));
  }
  append_key(out, "JOURNAL");
  append_json_string(out, c.journal);
  append_key(out, "YEAR");
  append_json_string(out, c.year ? std::to_string(*c.year) : std::string(kNone));
  append_key(out, "DOI");
  append_json_string(out, c.doi.value_or(std::string(kNone)));
  append_key(out, "AUTHORS");
  append_string_list(out, c.authors);
  append_key(out, "MeSH");
  out.push_back('{');
  bool first = true;
  for (const auto& [ui, name] : c.mesh) {
    if (!first) {
      out.push_back(',');
    }
    first = false;
    append_json_string(out, ui);
    out.push_back(':');
    append_json_string(out, name);
  }
  out.push_back('}');
  append_key(out, "CHEMICALS");
  append_list_or_none(out, c.chemicals);
  append_key(out, "SUPPLMeSH");
  append_list_or_none(out, c.suppl_mesh);
  out.push_back('}');
  return out;
}

ArticleRecord parse_record(std::string_view json_line) {
  Json obj;
  try {
    obj = Json::parse(json_line);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("record is not valid JSON: ") + e.what());
  }
  if (!obj.is_object()) {
    throw SchemaError("record line is not a JSON object");
  }

  ArticleRecord record;
  // Language and indexing mode are not part of the serialized schema: every
  // emitted record already passed the English/human-indexed filter.
  record.citation.language = "eng";
  record.citation.indexing_mode = IndexingMode::kHuman;
  record.citation.pmid = require_string(obj, "PMID");
  record.sections.pmid = record.citation.pmid;
  for (int s = 0; s < kSectionCount; ++s) {
    record.sections.sections[static_cast<std::size_t>(s)] =
        optional_string(obj, kSectionKeys[static_cast<std::size_t>(s)]);
  }
  record.citation.journal = require_string(obj, "JOURNAL");

  std::optional<std::string> year = optional_string(obj, "YEAR");
  if (year) {
    try {
      std::size_t used = 0;
      record.citation.year = std::stoi(*year, &used);
      if (used != year->size()) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw SchemaError("record YEAR is not an integer: '" + *year + "'");
    }
  }
  record.citation.doi = optional_string(obj, "DOI");

  const Json& authors = require_key(obj, "AUTHORS");
  if (!authors.is_array()) {
    throw SchemaError("record AUTHORS must be a list");
  }
  for (const Json& a : authors) {
    if (!a.is_string()) {
      throw SchemaError("record AUTHORS has a non-string entry");
    }
    record.citation.authors.push_back(a.get<std::string>());
  }

  const Json& mesh = require_key(obj, "MeSH");
  if (!mesh.is_object()) {
    throw SchemaError("record MeSH must be an object");
  }
  for (auto it = mesh.begin(); it != mesh.end(); ++it) {
    if (!is_descriptor_ui(it.key())) {
      throw SchemaError("record MeSH key '" + it.key() +
                        "' is not a descriptor UI");
    }
    if (!it.value().is_string()) {
      throw SchemaError("record MeSH value for '" + it.key() +
                        "' must be a string");
    }
    record.citation.mesh[it.key()] = it.value().get<std::string>();
  }

  record.citation.chemicals = string_list_or_none(obj, "CHEMICALS");
  record.citation.suppl_mesh = string_list_or_none(obj, "SUPPLMeSH");

  validate_record(record);
  return record;
}

std::string emit_sections(const FullTextSections& sections) {
  std::string out;
  out.push_back('{');
  append_key(out, "PMID", /*first=*/true);
  append_json_string(out, sections.pmid);
  for (int s = 0; s < kSectionCount; ++s) {
    append_key(out, kSectionKeys[static_cast<std::size_t>(s)]);
    append_json_string(out, sections.sections[static_cast<std::size_t>(s)]
                                .value_or(std::string(kNone)));
  }
  out.push_back('}');
  return out;
}

FullTextSections parse_sections(std::string_view json_line) {
  Json obj;
  try {
    obj = Json::parse(json_line);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("sections line is not valid JSON: ") + e.what());
  }
  FullTextSections out;
  out.pmid = require_string(obj, "PMID");
  for (int s = 0; s < kSectionCount; ++s) {
    out.sections[static_cast<std::size_t>(s)] =
        optional_string(obj, kSectionKeys[static_cast<std::size_t>(s)]);
  }
  return out;
}

}  // namespace meshidx::corpus
