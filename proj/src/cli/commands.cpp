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

#include "meshidx/cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "meshidx/corpus/bioc.hpp"
#include "meshidx/corpus/medline.hpp"
#include "meshidx/corpus/pipeline.hpp"
#include "meshidx/corpus/record.hpp"
#include "meshidx/eval/metrics.hpp"
#include "meshidx/eval/thresholds.hpp"
#include "meshidx/mesh/graph.hpp"
#include "meshidx/mesh/vocabulary.hpp"
#include "meshidx/model/network.hpp"
#include "meshidx/model/text_pipeline.hpp"
#include "meshidx/model/trainer.hpp"
#include "meshidx/nn/checkpoint.hpp"
#include "meshidx/util.hpp"

namespace meshidx::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

/// Removes declared outputs unless the command committed them.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) {
      return;
    }
    for (const fs::path& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  fs::path declare(fs::path p) {
    paths_.push_back(p);
    return p;
  }
  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  Json settings = Json::object();
  std::map<std::string, std::string> inputs;  // path -> digest
  std::vector<std::string> outputs;
  Json counts = Json::object();

  void add_input(const fs::path& path) {
    inputs[path.string()] = fnv1a64_hex(read_file(path));
  }

  void write(const fs::path& path) const {
    Json j;
    j["command"] = command;
    j["seed"] = seed;
    j["config_hash"] = fnv1a64_hex(settings.dump());
    j["settings"] = settings;
    Json in = Json::object();
    for (const auto& [p, digest] : inputs) {
      in[p] = digest;
    }
    j["inputs"] = std::move(in);
    j["outputs"] = outputs;
    j["counts"] = counts;
    write_file(path, j.dump(2) + "\n");
  }
};

std::vector<fs::path> sorted_regular_files(const fs::path& dir) {
  if (!fs::exists(dir) || !fs::is_directory(dir)) {
    throw std::runtime_error("not a readable directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Runs `work(file_index)` over all files with `workers` threads and
/// deterministic result ordering (results are merged by file index).
template <typename Work>
void parallel_over_files(std::size_t file_count, int workers, Work work) {
  const int n = std::max(1, workers);
  if (n == 1 || file_count <= 1) {
    for (std::size_t i = 0; i < file_count; ++i) {
      work(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> threads;
  for (int w = 0; w < n; ++w) {
    threads.emplace_back([&, w]() {
      try {
        for (std::size_t i = static_cast<std::size_t>(w); i < file_count;
             i += static_cast<std::size_t>(n)) {
          work(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) {
    t.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

void for_each_line(const fs::path& path,
                   const std::function<void(std::size_t, const std::string&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    fn(line_no, line);
  }
}

std::vector<corpus::ArticleRecord> load_records(const fs::path& path) {
  std::vector<corpus::ArticleRecord> records;
  for_each_line(path, [&](std::size_t line_no, const std::string& line) {
    try {
      records.push_back(corpus::parse_record(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  });
  return records;
}

std::vector<std::string> load_pmid_list(const fs::path& path) {
  std::vector<std::string> pmids;
  for_each_line(path, [&](std::size_t, const std::string& line) {
    pmids.push_back(line);
  });
  return pmids;
}

struct ScoreFile {
  std::vector<std::string> pmids;
  eval::ScoreMatrix scores;
};

ScoreFile load_scores(const fs::path& path) {
  ScoreFile out;
  for_each_line(path, [&](std::size_t line_no, const std::string& line) {
    try {
      Json j = Json::parse(line);
      out.pmids.push_back(j.at("pmid").get<std::string>());
      out.scores.push_back(j.at("scores").get<std::vector<double>>());
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  });
  return out;
}

/// Gold and prediction files share one shape: {"pmid":..., "labels":[UIs]}.
std::map<std::string, std::vector<std::string>> load_label_file(
    const fs::path& path) {
  std::map<std::string, std::vector<std::string>> out;
  for_each_line(path, [&](std::size_t line_no, const std::string& line) {
    try {
      Json j = Json::parse(line);
      out[j.at("pmid").get<std::string>()] =
          j.at("labels").get<std::vector<std::string>>();
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  });
  return out;
}

std::vector<std::int64_t> uis_to_ordinals(const std::vector<std::string>& uis,
                                          const mesh::MeshVocabulary& vocab,
                                          const std::string& pmid) {
  std::vector<std::int64_t> out;
  out.reserve(uis.size());
  for (const std::string& ui : uis) {
    auto ordinal = vocab.ordinal(ui);
    if (!ordinal) {
      throw std::runtime_error("document " + pmid + ": UI " + ui +
                               " is not in the descriptor vocabulary");
    }
    out.push_back(static_cast<std::int64_t>(*ordinal));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

mesh::EmbeddingLookup table_lookup(const model::WordVocab& vocab,
                                   const nn::Tensor& table) {
  const long d = static_cast<long>(table.dim(1));
  return [&vocab, &table, d](std::string_view token) -> const double* {
    long id = vocab.id(token);
    if (id == model::kUnkId || id == model::kPadId) {
      return nullptr;  // out-of-vocabulary tokens contribute zeros
    }
    return table.values().data() + static_cast<std::ptrdiff_t>(id) * d;
  };
}

struct LoadedModel {
  model::ModelConfig config;
  model::WordVocab vocab;
  model::ModelParams params;
  nn::Tensor label_init;
  std::string mesh_digest;
  nn::Index label_count = 0;
};

LoadedModel load_model(const fs::path& checkpoint_path) {
  nn::Checkpoint ckpt = nn::load_checkpoint(checkpoint_path);
  LoadedModel m;
  m.config = model::ModelConfig::from_json(ckpt.meta.at("config"));
  m.vocab = model::WordVocab::from_tokens(
      ckpt.meta.at("word_vocab").get<std::vector<std::string>>());
  m.mesh_digest = ckpt.meta.at("mesh_digest").get<std::string>();

  m.params.embedding = ckpt.find("embedding");
  for (int c = 0; c < model::kNumChannels; ++c) {
    std::string prefix =
        "channel." + std::string(model::kChannelNames[static_cast<std::size_t>(c)]);
    auto& channel = m.params.channels[static_cast<std::size_t>(c)];
    for (std::size_t layer = 0; layer < m.config.dilations.size(); ++layer) {
      channel.conv_kernels.push_back(
          ckpt.find(prefix + ".conv" + std::to_string(layer)));
    }
    channel.projection = ckpt.find(prefix + ".projection");
  }
  m.params.gcn_w0 = ckpt.find("gcn.w0");
  m.params.gcn_w1 = ckpt.find("gcn.w1");
  m.params.score_bias = ckpt.find("score_bias");
  m.label_init = ckpt.find("label_init");
  m.label_count = m.label_init.dim(0);
  return m;
}

model::TokenizedDoc prepare_doc_for_predict(const corpus::ArticleRecord& record,
                                            const model::WordVocab& vocab,
                                            const model::ModelConfig& config) {
  // Gold UIs are not needed (and may be absent from the vocabulary).
  mesh::MeshVocabulary empty;
  corpus::ArticleRecord stripped = record;
  stripped.citation.mesh.clear();
  return model::prepare_doc(stripped, vocab, empty, config);
}

}  // namespace

fs::path resolve_output(const fs::path& path) {
  const char* dir = std::getenv("MESHIDX_OUTPUT_DIR");
  if (dir != nullptr && *dir != '\0' && path.is_relative()) {
    return fs::path(dir) / path;
  }
  return path;
}

void cmd_build_corpus(const BuildCorpusArgs& args) {
  const std::vector<fs::path> bioc_files = sorted_regular_files(args.bioc_dir);
  const std::vector<fs::path> medline_files =
      sorted_regular_files(args.medline_dir);

  std::vector<std::vector<corpus::FullTextSections>> sections_by_file(
      bioc_files.size());
  parallel_over_files(bioc_files.size(), args.workers, [&](std::size_t i) {
    try {
      corpus::stream_bioc_file(bioc_files[i], [&](corpus::FullTextSections s) {
        sections_by_file[i].push_back(std::move(s));
      });
    } catch (const std::exception& e) {
      throw std::runtime_error(bioc_files[i].string() + ": " + e.what());
    }
  });

  std::vector<std::vector<corpus::CitationMetadata>> citations_by_file(
      medline_files.size());
  parallel_over_files(medline_files.size(), args.workers, [&](std::size_t i) {
    try {
      corpus::stream_medline_file(medline_files[i],
                                  [&](corpus::CitationMetadata c) {
                                    citations_by_file[i].push_back(std::move(c));
                                  });
    } catch (const std::exception& e) {
      throw std::runtime_error(medline_files[i].string() + ": " + e.what());
    }
  });

  const fs::path out = resolve_output(args.out);
  OutputGuard guard;
  guard.declare(out);
  const fs::path manifest_path = guard.declare(out.string() + ".manifest.json");

  corpus::JoinBuilder::Options join_options;
  join_options.spill_threshold = args.spill_threshold;
  join_options.spill_path = out.string() + ".spill";
  corpus::JoinBuilder builder(join_options);

  std::size_t documents_parsed = 0;
  for (auto& file_sections : sections_by_file) {
    for (auto& s : file_sections) {
      ++documents_parsed;
      builder.add_sections(std::move(s));
    }
  }
  std::size_t citations_parsed = 0;
  std::size_t citations_kept = 0;
  for (auto& file_citations : citations_by_file) {
    for (auto& c : file_citations) {
      ++citations_parsed;
      if (corpus::passes_ingest_filters(c)) {
        ++citations_kept;
        builder.add_citation(std::move(c));
      }
    }
  }

  std::ofstream records_out(out, std::ios::binary | std::ios::trunc);
  if (!records_out) {
    throw std::runtime_error("cannot open output file: " + out.string());
  }
  std::size_t joined = builder.emit_joined([&](const corpus::ArticleRecord& r) {
    records_out << corpus::emit_record(r) << '\n';
  });
  records_out.flush();
  if (!records_out.good()) {
    throw std::runtime_error("error writing records to " + out.string());
  }

  Manifest manifest;
  manifest.command = "build-corpus";
  manifest.seed = args.seed;
  manifest.settings = {{"bioc_dir", args.bioc_dir.string()},
                       {"medline_dir", args.medline_dir.string()},
                       {"workers", args.workers},
                       {"spill_threshold", args.spill_threshold}};
  for (const auto& f : bioc_files) {
    manifest.add_input(f);
  }
  for (const auto& f : medline_files) {
    manifest.add_input(f);
  }
  manifest.outputs = {out.string()};
  manifest.counts = {{"bioc_files", bioc_files.size()},
                     {"medline_files", medline_files.size()},
                     {"documents_parsed", documents_parsed},
                     {"citations_parsed", citations_parsed},
                     {"citations_kept", citations_kept},
                     {"duplicate_documents", builder.duplicate_sections()},
                     {"duplicate_citations", builder.duplicate_citations()},
                     {"spilled_to_disk", builder.spilled()},
                     {"joined", joined}};
  manifest.write(manifest_path);
  guard.commit();
}

void cmd_stats(const StatsArgs& args) {
  corpus::StatsAccumulator acc;
  std::size_t records = 0;
  for_each_line(args.records, [&](std::size_t line_no, const std::string& line) {
    try {
      acc.add(corpus::parse_record(line));
      ++records;
    } catch (const std::exception& e) {
      throw std::runtime_error(args.records.string() + ":" +
                               std::to_string(line_no) + ": " + e.what());
    }
  });

  const fs::path out = resolve_output(args.out);
  OutputGuard guard;
  guard.declare(out);
  const fs::path manifest_path = guard.declare(out.string() + ".manifest.json");
  write_file(out, acc.finish().to_json() + "\n");

  Manifest manifest;
  manifest.command = "stats";
  manifest.settings = {{"records", args.records.string()}};
  manifest.add_input(args.records);
  manifest.outputs = {out.string()};
  manifest.counts = {{"records", records}};
  manifest.write(manifest_path);
  guard.commit();
}

void cmd_split(const SplitArgs& args) {
  std::vector<corpus::ArticleRecord> records = load_records(args.records);
  std::size_t incomplete_dropped = 0;
  if (args.complete_only) {
    std::size_t before = records.size();
    records = corpus::select_complete(records);
    incomplete_dropped = before - records.size();
  }

  corpus::SplitSpec spec;
  spec.ratios = args.ratios;
  spec.seed = args.seed;
  corpus::SplitResult split = corpus::stratified_split(records, spec);

  const fs::path out_dir = resolve_output(args.out_dir);
  fs::create_directories(out_dir);
  OutputGuard guard;
  const fs::path train_path = guard.declare(out_dir / "train_pmids.txt");
  const fs::path val_path = guard.declare(out_dir / "val_pmids.txt");
  const fs::path test_path = guard.declare(out_dir / "test_pmids.txt");
  const fs::path manifest_path = guard.declare(out_dir / "split.manifest.json");

  auto write_pmids = [](const fs::path& path,
                        const std::vector<corpus::ArticleRecord>& part) {
    std::string body;
    for (const corpus::ArticleRecord& r : part) {
      body += r.pmid();
      body += '\n';
    }
    write_file(path, body);
  };
  write_pmids(train_path, split.train);
  write_pmids(val_path, split.validation);
  write_pmids(test_path, split.test);

  Manifest manifest;
  manifest.command = "split";
  manifest.seed = args.seed;
  manifest.settings = {{"records", args.records.string()},
                       {"ratios", args.ratios},
                       {"complete_only", args.complete_only}};
  manifest.add_input(args.records);
  manifest.outputs = {train_path.string(), val_path.string(), test_path.string()};
  manifest.counts = {{"input_records", records.size() + incomplete_dropped},
                     {"incomplete_dropped", incomplete_dropped},
                     {"train", split.train.size()},
                     {"validation", split.validation.size()},
                     {"test", split.test.size()}};
  manifest.write(manifest_path);
  guard.commit();
}

void cmd_train(const TrainArgs& args) {
  const model::ModelConfig& config = args.config;
  config.validate();

  std::vector<corpus::ArticleRecord> records = load_records(args.records);
  std::map<std::string, const corpus::ArticleRecord*> by_pmid;
  for (const corpus::ArticleRecord& r : records) {
    by_pmid[r.pmid()] = &r;
  }
  auto select = [&](const fs::path& list_path) {
    std::vector<corpus::ArticleRecord> out;
    for (const std::string& pmid : load_pmid_list(list_path)) {
      auto it = by_pmid.find(pmid);
      if (it == by_pmid.end()) {
        throw std::runtime_error("pmid " + pmid + " from " + list_path.string() +
                                 " is not in the record file");
      }
      out.push_back(*it->second);
    }
    return out;
  };
  std::vector<corpus::ArticleRecord> train_records = select(args.train_pmids);
  std::vector<corpus::ArticleRecord> val_records;
  if (args.val_pmids) {
    val_records = select(*args.val_pmids);
  }
  if (train_records.empty()) {
    throw std::runtime_error("training set is empty");
  }

  mesh::MeshVocabulary mesh_vocab = mesh::MeshVocabulary::load(args.mesh_tsv);
  const std::string mesh_digest = fnv1a64_hex(read_file(args.mesh_tsv));
  nn::Tensor adjacency =
      mesh::build_adjacency(mesh_vocab, config.normalized_adjacency);

  model::WordVocab vocab = model::WordVocab::build(train_records, config);
  const auto vocab_size = static_cast<nn::Index>(vocab.size());

  // Label-name embeddings come from the pretrained file when given,
  // otherwise from the same seeded table the model starts from.
  nn::Tensor label_init;
  nn::Tensor pretrained_table;
  bool has_pretrained = false;
  if (args.embeddings) {
    mesh::WordEmbeddingFile emb = mesh::WordEmbeddingFile::load(*args.embeddings);
    if (emb.dim() != config.embedding_dim) {
      throw std::runtime_error(
          "embedding file dimension " + std::to_string(emb.dim()) +
          " does not match embedding_dim " + std::to_string(config.embedding_dim));
    }
    label_init = mesh::init_label_embeddings(mesh_vocab, emb.lookup_fn(),
                                             config.embedding_dim);
    std::mt19937_64 rng(config.seed);
    pretrained_table = model::initial_embedding_table(config, vocab_size, rng);
    for (long id = 2; id < vocab_size; ++id) {
      const double* vec = emb.lookup(vocab.tokens()[static_cast<std::size_t>(id)]);
      if (vec != nullptr) {
        std::copy(vec, vec + config.embedding_dim,
                  pretrained_table.values().begin() +
                      static_cast<std::ptrdiff_t>(id) * config.embedding_dim);
      }
    }
    has_pretrained = true;
  } else {
    std::mt19937_64 rng(config.seed);
    nn::Tensor table = model::initial_embedding_table(config, vocab_size, rng);
    label_init = mesh::init_label_embeddings(mesh_vocab, table_lookup(vocab, table),
                                             config.embedding_dim);
  }

  auto prepare_all = [&](const std::vector<corpus::ArticleRecord>& rs) {
    std::vector<model::TokenizedDoc> docs;
    docs.reserve(rs.size());
    for (const corpus::ArticleRecord& r : rs) {
      docs.push_back(model::prepare_doc(r, vocab, mesh_vocab, config));
    }
    return docs;
  };
  std::vector<model::TokenizedDoc> train_docs = prepare_all(train_records);
  std::vector<model::TokenizedDoc> val_docs = prepare_all(val_records);

  model::TrainResult result =
      model::train(train_docs, val_docs, vocab_size, adjacency, label_init,
                   config, has_pretrained ? &pretrained_table : nullptr);

  const fs::path out = resolve_output(args.out_checkpoint);
  OutputGuard guard;
  guard.declare(out);
  const fs::path manifest_path = guard.declare(out.string() + ".manifest.json");

  std::vector<nn::CheckpointEntry> entries;
  for (const auto& [name, tensor] : result.params.named()) {
    entries.push_back({name, tensor, true});
  }
  entries.push_back({"label_init", label_init, false});
  Json meta;
  meta["config"] = config.to_json();
  meta["word_vocab"] = vocab.tokens();
  meta["mesh_digest"] = mesh_digest;
  meta["label_count"] = mesh_vocab.size();
  nn::save_checkpoint(out, entries, meta);

  if (args.loss_trace_out) {
    const fs::path trace_path = guard.declare(resolve_output(*args.loss_trace_out));
    Json trace;
    trace["loss"] = result.loss_trace;
    trace["best_val_micro_f"] = result.best_val_micro_f;
    trace["best_epoch"] = result.best_epoch;
    trace["epochs_run"] = result.epochs_run;
    write_file(trace_path, trace.dump(2) + "\n");
  }

  Manifest manifest;
  manifest.command = "train";
  manifest.seed = config.seed;
  manifest.settings = config.to_json();
  manifest.settings["records"] = args.records.string();
  manifest.settings["mesh_tsv"] = args.mesh_tsv.string();
  manifest.add_input(args.records);
  manifest.add_input(args.mesh_tsv);
  manifest.add_input(args.train_pmids);
  if (args.val_pmids) {
    manifest.add_input(*args.val_pmids);
  }
  if (args.embeddings) {
    manifest.add_input(*args.embeddings);
  }
  manifest.outputs = {out.string()};
  manifest.counts = {{"train_documents", train_docs.size()},
                     {"validation_documents", val_docs.size()},
                     {"word_vocab_size", vocab.size()},
                     {"labels", mesh_vocab.size()},
                     {"epochs_run", result.epochs_run},
                     {"best_epoch", result.best_epoch},
                     {"best_val_micro_f", result.best_val_micro_f}};
  manifest.write(manifest_path);
  guard.commit();
}

void cmd_predict(const PredictArgs& args) {
  LoadedModel m = load_model(args.checkpoint);
  mesh::MeshVocabulary mesh_vocab = mesh::MeshVocabulary::load(args.mesh_tsv);
  if (fnv1a64_hex(read_file(args.mesh_tsv)) != m.mesh_digest) {
    throw std::runtime_error(
        "descriptor vocabulary does not match the checkpoint (digest mismatch)");
  }
  if (static_cast<nn::Index>(mesh_vocab.size()) != m.label_count) {
    throw std::runtime_error("descriptor vocabulary size mismatch");
  }

  std::vector<corpus::ArticleRecord> records = load_records(args.records);
  std::vector<model::TokenizedDoc> docs;
  docs.reserve(records.size());
  for (const corpus::ArticleRecord& r : records) {
    docs.push_back(prepare_doc_for_predict(r, m.vocab, m.config));
  }

  nn::Tensor adjacency =
      mesh::build_adjacency(mesh_vocab, m.config.normalized_adjacency);
  std::vector<std::vector<double>> scores =
      model::predict(docs, m.params, adjacency, m.label_init, m.config);

  const fs::path out = resolve_output(args.out);
  OutputGuard guard;
  guard.declare(out);
  const fs::path manifest_path = guard.declare(out.string() + ".manifest.json");

  std::ofstream top_out(out, std::ios::binary | std::ios::trunc);
  if (!top_out) {
    throw std::runtime_error("cannot open output file: " + out.string());
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Json line;
    line["pmid"] = docs[i].pmid;
    Json top = Json::array();
    for (std::int64_t l : eval::top_k_indices(scores[i], args.top_k)) {
      top.push_back(Json::array(
          {mesh_vocab.at(static_cast<std::size_t>(l)).ui,
           scores[i][static_cast<std::size_t>(l)]}));
    }
    line["top"] = std::move(top);
    top_out << line.dump() << '\n';
  }
  top_out.flush();
  if (!top_out.good()) {
    throw std::runtime_error("error writing predictions to " + out.string());
  }

  if (args.scores_out) {
    const fs::path scores_path = guard.declare(resolve_output(*args.scores_out));
    std::ofstream scores_out(scores_path, std::ios::binary | std::ios::trunc);
    if (!scores_out) {
      throw std::runtime_error("cannot open score file: " + scores_path.string());
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
      Json line;
      line["pmid"] = docs[i].pmid;
      line["scores"] = scores[i];
      scores_out << line.dump() << '\n';
    }
    scores_out.flush();
    if (!scores_out.good()) {
      throw std::runtime_error("error writing scores to " + scores_path.string());
    }
  }

  Manifest manifest;
  manifest.command = "predict";
  manifest.seed = m.config.seed;
  manifest.settings = {{"checkpoint", args.checkpoint.string()},
                       {"records", args.records.string()},
                       {"top_k", args.top_k}};
  manifest.add_input(args.checkpoint);
  manifest.add_input(args.records);
  manifest.add_input(args.mesh_tsv);
  manifest.outputs = {out.string()};
  if (args.scores_out) {
    manifest.outputs.push_back(resolve_output(*args.scores_out).string());
  }
  manifest.counts = {{"documents", docs.size()}, {"labels", mesh_vocab.size()}};
  manifest.write(manifest_path);
  guard.commit();
}

namespace {

struct AlignedEval {
  eval::LabelSets gold;
  eval::ScoreMatrix scores;
};

AlignedEval align_scores_with_gold(const ScoreFile& score_file,
                                   const std::map<std::string, std::vector<std::string>>& gold,
                                   const mesh::MeshVocabulary& vocab) {
  AlignedEval out;
  out.scores = score_file.scores;
  out.gold.reserve(score_file.pmids.size());
  for (std::size_t i = 0; i < score_file.pmids.size(); ++i) {
    const std::string& pmid = score_file.pmids[i];
    auto it = gold.find(pmid);
    if (it == gold.end()) {
      throw std::runtime_error("gold file has no entry for pmid " + pmid);
    }
    if (out.scores[i].size() != vocab.size()) {
      throw std::runtime_error("score vector for pmid " + pmid + " has length " +
                               std::to_string(out.scores[i].size()) +
                               ", expected " + std::to_string(vocab.size()));
    }
    out.gold.push_back(uis_to_ordinals(it->second, vocab, pmid));
  }
  return out;
}

}  // namespace

void cmd_tune_thresholds(const TuneArgs& args) {
  mesh::MeshVocabulary mesh_vocab = mesh::MeshVocabulary::load(args.mesh_tsv);
  ScoreFile score_file = load_scores(args.scores);
  AlignedEval aligned =
      align_scores_with_gold(score_file, load_label_file(args.gold), mesh_vocab);

  std::vector<double> tau =
      eval::tune_thresholds(aligned.scores, aligned.gold, args.max_sweeps);

  const fs::path out = resolve_output(args.out);
  OutputGuard guard;
  guard.declare(out);
  const fs::path manifest_path = guard.declare(out.string() + ".manifest.json");
  write_file(out, Json(tau).dump() + "\n");

  const double tuned_mif =
      eval::micro_f(aligned.gold, eval::apply_thresholds(aligned.scores, tau),
                    static_cast<std::int64_t>(mesh_vocab.size()));
  Manifest manifest;
  manifest.command = "tune-thresholds";
  manifest.settings = {{"scores", args.scores.string()},
                       {"gold", args.gold.string()},
                       {"max_sweeps", args.max_sweeps}};
  manifest.add_input(args.scores);
  manifest.add_input(args.gold);
  manifest.add_input(args.mesh_tsv);
  manifest.outputs = {out.string()};
  manifest.counts = {{"documents", aligned.gold.size()},
                     {"labels", mesh_vocab.size()},
                     {"tuned_micro_f", tuned_mif}};
  manifest.write(manifest_path);
  guard.commit();
}

void cmd_evaluate(const EvaluateArgs& args) {
  if (args.scores.has_value() == args.preds.has_value()) {
    throw std::runtime_error("evaluate needs exactly one of --scores / --preds");
  }
  mesh::MeshVocabulary mesh_vocab = mesh::MeshVocabulary::load(args.mesh_tsv);
  const auto label_count = static_cast<std::int64_t>(mesh_vocab.size());
  auto gold_by_pmid = load_label_file(args.gold);

  eval::MetricsReport report;
  std::size_t documents = 0;
  if (args.scores) {
    ScoreFile score_file = load_scores(*args.scores);
    AlignedEval aligned =
        align_scores_with_gold(score_file, gold_by_pmid, mesh_vocab);
    documents = aligned.gold.size();
    std::vector<double> tau(mesh_vocab.size(), 0.5);
    if (args.thresholds) {
      Json j = Json::parse(read_file(*args.thresholds));
      tau = j.get<std::vector<double>>();
      if (tau.size() != mesh_vocab.size()) {
        throw std::runtime_error("threshold vector length mismatch");
      }
    }
    eval::LabelSets predicted = eval::apply_thresholds(aligned.scores, tau);
    report = eval::full_report(aligned.gold, predicted, aligned.scores,
                               label_count, args.ks);
  } else {
    auto preds_by_pmid = load_label_file(*args.preds);
    eval::LabelSets gold;
    eval::LabelSets predicted;
    for (const auto& [pmid, uis] : preds_by_pmid) {
      auto it = gold_by_pmid.find(pmid);
      if (it == gold_by_pmid.end()) {
        throw std::runtime_error("gold file has no entry for pmid " + pmid);
      }
      predicted.push_back(uis_to_ordinals(uis, mesh_vocab, pmid));
      gold.push_back(uis_to_ordinals(it->second, mesh_vocab, pmid));
      ++documents;
    }
    report.example = eval::example_based(gold, predicted);
    report.label = eval::label_based(gold, predicted, label_count);
  }

  const fs::path out = resolve_output(args.out);
  OutputGuard guard;
  guard.declare(out);
  const fs::path manifest_path = guard.declare(out.string() + ".manifest.json");
  write_file(out, report.to_json().dump(2) + "\n");

  Manifest manifest;
  manifest.command = "evaluate";
  manifest.settings = {{"gold", args.gold.string()}, {"ks", args.ks}};
  if (args.scores) {
    manifest.settings["scores"] = args.scores->string();
    manifest.add_input(*args.scores);
  }
  if (args.preds) {
    manifest.settings["preds"] = args.preds->string();
    manifest.add_input(*args.preds);
  }
  if (args.thresholds) {
    manifest.settings["thresholds"] = args.thresholds->string();
    manifest.add_input(*args.thresholds);
  }
  manifest.add_input(args.gold);
  manifest.add_input(args.mesh_tsv);
  manifest.outputs = {out.string()};
  manifest.counts = {{"documents", documents}, {"labels", mesh_vocab.size()}};
  manifest.write(manifest_path);
  guard.commit();
}

}  // namespace meshidx::cli
