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

#include "meshidx/corpus/medline.hpp"

#include <cctype>
#include <ctime>
#include <string>

#include "meshidx/gzip.hpp"
#include "meshidx/util.hpp"
#include "meshidx/xml.hpp"

namespace meshidx::corpus {

namespace {

int current_calendar_year() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  return utc.tm_year + 1900;
}

std::optional<int> parse_year_digits(std::string_view text) {
  for (std::size_t i = 0; i + 4 <= text.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(text[i])) &&
        std::isdigit(static_cast<unsigned char>(text[i + 1])) &&
        std::isdigit(static_cast<unsigned char>(text[i + 2])) &&
        std::isdigit(static_cast<unsigned char>(text[i + 3]))) {
      return (text[i] - '0') * 1000 + (text[i + 1] - '0') * 100 +
             (text[i + 2] - '0') * 10 + (text[i + 3] - '0');
    }
  }
  return std::nullopt;
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

std::string author_display_name(const xml::Element& author) {
  if (const xml::Element* collective = author.child("CollectiveName")) {
    return normalize_text(collective->deep_text());
  }
  std::string fore;
  if (const xml::Element* fore_el = author.child("ForeName")) {
    fore = normalize_text(fore_el->deep_text());
  } else if (const xml::Element* initials = author.child("Initials")) {
    fore = normalize_text(initials->deep_text());
  }
  std::string last;
  if (const xml::Element* last_el = author.child("LastName")) {
    last = normalize_text(last_el->deep_text());
  }
  if (fore.empty()) {
    return last;
  }
  if (last.empty()) {
    return fore;
  }
  return fore + "," + last;
}

CitationMetadata citation_from_elements(const xml::Element& citation_el,
                                        const xml::Element* pubmed_data) {
  CitationMetadata out;

  if (const std::string* method = citation_el.attribute("IndexingMethod")) {
    if (*method == "Curated") {
      out.indexing_mode = IndexingMode::kCurated;
    } else if (*method == "Automated") {
      out.indexing_mode = IndexingMode::kAuto;
    } else {
      throw SchemaError("unknown IndexingMethod '" + *method + "'");
    }
  } else {
    out.indexing_mode = IndexingMode::kHuman;
  }

  const xml::Element* pmid_el = citation_el.child("PMID");
  if (pmid_el == nullptr) {
    throw SchemaError("MedlineCitation has no PMID element");
  }
  out.pmid = normalize_text(pmid_el->deep_text());
  if (out.pmid.empty()) {
    throw SchemaError("MedlineCitation has an empty PMID");
  }

  const xml::Element* article = citation_el.child("Article");
  if (article == nullptr) {
    throw SchemaError("citation " + out.pmid + " has no Article element");
  }

  if (const xml::Element* language = article->child("Language")) {
    out.language = normalize_text(language->deep_text());
  }
  if (const xml::Element* title = article->find({"Journal", "Title"})) {
    out.journal = normalize_text(title->deep_text());
  }

  if (const xml::Element* pub_date =
          article->find({"Journal", "JournalIssue", "PubDate"})) {
    if (const xml::Element* year = pub_date->child("Year")) {
      out.year = parse_year_digits(year->deep_text());
    } else if (const xml::Element* medline_date = pub_date->child("MedlineDate")) {
      out.year = parse_year_digits(medline_date->deep_text());
    }
  }
  if (out.year && (*out.year < 1800 || *out.year > current_calendar_year())) {
    throw SchemaError("citation " + out.pmid + " has implausible year " +
                      std::to_string(*out.year));
  }

  article->for_each_child("ELocationID", [&](const xml::Element& eloc) {
    if (out.doi) {
      return;
    }
    const std::string* type = eloc.attribute("EIdType");
    if (type != nullptr && *type == "doi") {
      std::string value = normalize_text(eloc.deep_text());
      if (!value.empty()) {
        out.doi = value;
      }
    }
  });
  if (!out.doi && pubmed_data != nullptr) {
    if (const xml::Element* ids = pubmed_data->child("ArticleIdList")) {
      ids->for_each_child("ArticleId", [&](const xml::Element& id) {
        if (out.doi) {
          return;
        }
        const std::string* type = id.attribute("IdType");
        if (type != nullptr && *type == "doi") {
          std::string value = normalize_text(id.deep_text());
          if (!value.empty()) {
            out.doi = value;
          }
        }
      });
    }
  }

  if (const xml::Element* author_list = article->child("AuthorList")) {
    author_list->for_each_child("Author", [&](const xml::Element& author) {
      std::string name = author_display_name(author);
      if (!name.empty()) {
        out.authors.push_back(std::move(name));
      }
    });
  }

  if (const xml::Element* mesh_list = citation_el.child("MeshHeadingList")) {
    mesh_list->for_each_child("MeshHeading", [&](const xml::Element& heading) {
      const xml::Element* descriptor = heading.child("DescriptorName");
      if (descriptor == nullptr) {
        throw SchemaError("citation " + out.pmid +
                          " has a MeshHeading without DescriptorName");
      }
      const std::string* ui = descriptor->attribute("UI");
      if (ui == nullptr || !is_descriptor_ui(*ui)) {
        throw SchemaError("citation " + out.pmid +
                          " has a DescriptorName without a valid UI");
      }
      out.mesh[*ui] = normalize_text(descriptor->deep_text());
    });
  }

  if (const xml::Element* chemicals = citation_el.child("ChemicalList")) {
    chemicals->for_each_child("Chemical", [&](const xml::Element& chemical) {
      if (const xml::Element* name = chemical.child("NameOfSubstance")) {
        std::string value = normalize_text(name->deep_text());
        if (!value.empty()) {
          out.chemicals.push_back(std::move(value));
        }
      }
    });
  }

  if (const xml::Element* suppl = citation_el.child("SupplMeshList")) {
    suppl->for_each_child("SupplMeshName", [&](const xml::Element& name) {
      std::string value = normalize_text(name.deep_text());
      if (!value.empty()) {
        out.suppl_mesh.push_back(std::move(value));
      }
    });
  }

  return out;
}

CitationMetadata citation_from_article_element(const xml::Element& pubmed_article) {
  const xml::Element* citation = pubmed_article.child("MedlineCitation");
  if (citation == nullptr) {
    throw SchemaError("PubmedArticle has no MedlineCitation");
  }
  return citation_from_elements(*citation, pubmed_article.child("PubmedData"));
}

}  // namespace

CitationMetadata parse_medline_citation(std::string_view xml_text) {
  xml::Element root = xml::parse_document(xml_text);
  if (root.name == "PubmedArticle") {
    return citation_from_article_element(root);
  }
  if (root.name == "MedlineCitation") {
    return citation_from_elements(root, nullptr);
  }
  if (root.name == "PubmedArticleSet") {
    const xml::Element* article = root.child("PubmedArticle");
    if (article == nullptr) {
      throw SchemaError("PubmedArticleSet has no PubmedArticle");
    }
    return citation_from_article_element(*article);
  }
  throw SchemaError("expected a MEDLINE citation root, got <" + root.name + ">");
}

std::size_t stream_medline_citations(
    std::string_view xml_text, const std::function<void(CitationMetadata)>& sink) {
  xml::Cursor cursor(xml_text);
  std::size_t count = 0;
  while (cursor.seek("PubmedArticle")) {
    sink(citation_from_article_element(cursor.parse_element()));
    ++count;
  }
  if (count > 0) {
    return count;
  }
  // Some exports carry bare MedlineCitation elements.
  xml::Cursor bare(xml_text);
  while (bare.seek("MedlineCitation")) {
    sink(citation_from_elements(bare.parse_element(), nullptr));
    ++count;
  }
  return count;
}

std::size_t stream_medline_file(const std::filesystem::path& path,
                                const std::function<void(CitationMetadata)>& sink) {
  std::string bytes = read_file_maybe_gzip(path);
  return stream_medline_citations(bytes, sink);
}

}  // namespace meshidx::corpus
