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

#ifndef MESHIDX_MESH_VOCABULARY_HPP
#define MESHIDX_MESH_VOCABULARY_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace meshidx::mesh {

struct MeshDescriptor {
  std::string ui;
  std::string name;
  std::vector<std::string> tree_numbers;  // dotted positions, e.g. "A01.111"
};

/// Ordered descriptor list with a UI -> ordinal index. Ordinals follow file
/// order, so reloading the same file reproduces the same mapping.
class MeshVocabulary {
 public:
  MeshVocabulary() = default;
  explicit MeshVocabulary(std::vector<MeshDescriptor> descriptors);

  /// Loads a TSV of `ui \t name \t tree_numbers` rows, tree numbers separated
  /// by ';' (the third field may be empty for rootless descriptors). Throws
  /// std::runtime_error naming the offending line on malformed rows or
  /// duplicate UIs.
  static MeshVocabulary load(const std::filesystem::path& path);
  static MeshVocabulary parse(std::string_view tsv_text);

  std::size_t size() const { return descriptors_.size(); }
  const MeshDescriptor& at(std::size_t ordinal) const {
    return descriptors_.at(ordinal);
  }
  const std::vector<MeshDescriptor>& descriptors() const { return descriptors_; }
  std::optional<std::size_t> ordinal(std::string_view ui) const;

 private:
  std::vector<MeshDescriptor> descriptors_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace meshidx::mesh

#endif  // MESHIDX_MESH_VOCABULARY_HPP
