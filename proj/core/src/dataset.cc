// Copyright 2026 The PRoBit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "probit/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

#include "probit/errors.h"

namespace probit {
namespace {

void Shuffle(std::vector<std::size_t>& items, RngStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.UniformInt(i)]);
  }
}

// Integer max-flow (Edmonds-Karp) with capacities that can be raised between
// solves; flow already pushed is kept.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : adjacency_(nodes) {}

  std::size_t AddEdge(std::size_t from, std::size_t to, int64_t capacity) {
    adjacency_[from].push_back(edges_.size());
    edges_.push_back({to, capacity});
    adjacency_[to].push_back(edges_.size());
    edges_.push_back({from, 0});
    return edges_.size() - 2;
  }

  void RaiseCapacity(std::size_t edge, int64_t extra) { edges_[edge].residual += extra; }

  // Flow currently on a forward edge.
  int64_t Flow(std::size_t edge) const { return edges_[edge ^ 1].residual; }

  int64_t Solve(std::size_t source, std::size_t sink) {
    int64_t total = 0;
    std::vector<std::size_t> parent_edge(adjacency_.size());
    while (true) {
      std::vector<bool> seen(adjacency_.size(), false);
      std::queue<std::size_t> frontier;
      frontier.push(source);
      seen[source] = true;
      while (!frontier.empty() && !seen[sink]) {
        const std::size_t node = frontier.front();
        frontier.pop();
        for (std::size_t e : adjacency_[node]) {
          const std::size_t next = edges_[e].to;
          if (!seen[next] && edges_[e].residual > 0) {
            seen[next] = true;
            parent_edge[next] = e;
            frontier.push(next);
          }
        }
      }
      if (!seen[sink]) return total;
      int64_t push = std::numeric_limits<int64_t>::max();
      for (std::size_t v = sink; v != source; v = edges_[parent_edge[v] ^ 1].to) {
        push = std::min(push, edges_[parent_edge[v]].residual);
      }
      for (std::size_t v = sink; v != source; v = edges_[parent_edge[v] ^ 1].to) {
        edges_[parent_edge[v]].residual -= push;
        edges_[parent_edge[v] ^ 1].residual += push;
      }
      total += push;
    }
  }

 private:
  struct Edge {
    std::size_t to;
    int64_t residual;
  };
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Edge> edges_;
};

}  // namespace

void Dataset::Validate() const {
  if (num_classes < 1) throw PreconditionError("Dataset: num_classes < 1");
  if (features.size() != labels.size() * num_features) {
    throw PreconditionError("Dataset: feature matrix has the wrong size");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw PreconditionError("Dataset: label out of range at sample " +
                              std::to_string(i));
    }
  }
}

Dataset Subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.num_features = data.num_features;
  out.num_classes = data.num_classes;
  out.features.reserve(indices.size() * data.num_features);
  out.labels.reserve(indices.size());
  for (std::size_t idx : indices) {
    const auto row = data.row(idx);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(data.labels.at(idx));
  }
  return out;
}

SyntheticTask MakeSyntheticTask(int num_classes, std::size_t num_features,
                                double spread, RngStream& rng) {
  if (num_classes < 2) throw PreconditionError("MakeSyntheticTask: need C >= 2");
  if (num_features == 0) throw PreconditionError("MakeSyntheticTask: need p >= 1");
  SyntheticTask task;
  task.num_classes = num_classes;
  task.num_features = num_features;
  task.centers.resize(static_cast<std::size_t>(num_classes) * num_features);
  for (int c = 0; c < num_classes; ++c) {
    double* center = task.centers.data() + c * num_features;
    double norm = 0.0;
    do {
      norm = 0.0;
      for (std::size_t j = 0; j < num_features; ++j) {
        center[j] = rng.Normal();
        norm += center[j] * center[j];
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (std::size_t j = 0; j < num_features; ++j) center[j] *= spread / norm;
  }
  return task;
}

Dataset SampleSynthetic(const SyntheticTask& task, std::size_t per_class,
                        RngStream& rng) {
  Dataset data;
  data.num_features = task.num_features;
  data.num_classes = task.num_classes;
  const std::size_t n = per_class * task.num_classes;
  data.features.reserve(n * task.num_features);
  data.labels.reserve(n);
  for (int c = 0; c < task.num_classes; ++c) {
    const double* center = task.centers.data() + c * task.num_features;
    for (std::size_t s = 0; s < per_class; ++s) {
      for (std::size_t j = 0; j < task.num_features; ++j) {
        data.features.push_back(center[j] + rng.Normal());
      }
      data.labels.push_back(c);
    }
  }
  return data;
}

Dataset SynthGenerate(int num_classes, std::size_t per_class,
                      std::size_t num_features, double spread, RngStream& rng) {
  const SyntheticTask task =
      MakeSyntheticTask(num_classes, num_features, spread, rng);
  return SampleSynthetic(task, per_class, rng);
}

std::vector<Dataset> PartitionLabelSkew(const Dataset& data,
                                        std::size_t num_clients,
                                        int classes_per_client,
                                        RngStream& rng) {
  data.Validate();
  if (num_clients == 0) throw ConfigError("partition: need at least one client");
  if (classes_per_client < 1 || classes_per_client > data.num_classes) {
    throw ConfigError("partition: classes_per_client must lie in [1, " +
                      std::to_string(data.num_classes) + "]");
  }
  std::vector<std::vector<std::size_t>> by_class(data.num_classes);
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
  std::vector<std::size_t> present;
  for (int c = 0; c < data.num_classes; ++c) {
    if (!by_class[c].empty()) present.push_back(static_cast<std::size_t>(c));
  }
  if (num_clients * static_cast<std::size_t>(classes_per_client) < present.size()) {
    throw ConfigError("partition: " + std::to_string(num_clients) + " clients x " +
                      std::to_string(classes_per_client) +
                      " classes cannot cover " + std::to_string(present.size()) +
                      " classes");
  }
  const std::size_t k =
      std::min(static_cast<std::size_t>(classes_per_client), present.size());

  // Least-used classes first, random among ties.
  std::vector<std::size_t> usage(data.num_classes, 0);
  std::vector<std::vector<std::size_t>> chosen(num_clients);
  for (std::size_t m = 0; m < num_clients; ++m) {
    std::vector<std::size_t> order = present;
    Shuffle(order, rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return usage[a] < usage[b]; });
    chosen[m].assign(order.begin(), order.begin() + k);
    for (std::size_t c : chosen[m]) ++usage[c];
  }

  // Transport samples class -> client with a max-flow: first with per-class
  // caps that spread each client over its classes, then uncapped, then with
  // client sizes relaxed if equal sizes are infeasible.
  const std::size_t n = data.size();
  const std::size_t num_classes = data.num_classes;
  const std::size_t source = 0;
  const std::size_t sink = 1 + num_classes + num_clients;
  FlowNetwork network(sink + 1);
  for (std::size_t c : present) {
    network.AddEdge(source, 1 + c, static_cast<int64_t>(by_class[c].size()));
  }
  std::vector<std::vector<std::size_t>> class_edges(num_clients);
  std::vector<std::size_t> client_edges(num_clients);
  for (std::size_t m = 0; m < num_clients; ++m) {
    const std::size_t target = n / num_clients + (m < n % num_clients ? 1 : 0);
    const auto spread_cap = static_cast<int64_t>((target + k - 1) / k);
    for (std::size_t c : chosen[m]) {
      class_edges[m].push_back(network.AddEdge(1 + c, 1 + num_classes + m, spread_cap));
    }
    client_edges[m] =
        network.AddEdge(1 + num_classes + m, sink, static_cast<int64_t>(target));
  }
  int64_t assigned = network.Solve(source, sink);
  if (assigned < static_cast<int64_t>(n)) {
    for (auto& edges : class_edges) {
      for (std::size_t e : edges) network.RaiseCapacity(e, static_cast<int64_t>(n));
    }
    assigned += network.Solve(source, sink);
  }
  if (assigned < static_cast<int64_t>(n)) {
    for (std::size_t e : client_edges) network.RaiseCapacity(e, static_cast<int64_t>(n));
    assigned += network.Solve(source, sink);
  }

  for (auto& indices : by_class) {
    std::vector<std::size_t> shuffled = indices;
    Shuffle(shuffled, rng);
    indices = std::move(shuffled);
  }
  std::vector<std::size_t> cursor(num_classes, 0);
  std::vector<Dataset> clients;
  clients.reserve(num_clients);
  for (std::size_t m = 0; m < num_clients; ++m) {
    std::vector<std::size_t> indices;
    for (std::size_t j = 0; j < chosen[m].size(); ++j) {
      const std::size_t c = chosen[m][j];
      const auto take = static_cast<std::size_t>(network.Flow(class_edges[m][j]));
      for (std::size_t t = 0; t < take; ++t) indices.push_back(by_class[c][cursor[c]++]);
    }
    clients.push_back(Subset(data, indices));
  }
  return clients;
}

Dataset LoadDatasetCsv(std::istream& in, int num_classes) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset csv: empty input");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.back() != "label") {
    throw ConfigError("dataset csv line 1: header must be f0,...,f{p-1},label");
  }
  for (std::size_t j = 0; j + 1 < header.size(); ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw ConfigError("dataset csv line 1: expected column f" +
                        std::to_string(j) + ", got '" + header[j] + "'");
    }
  }
  Dataset data;
  data.num_features = header.size() - 1;
  int max_label = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t column = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        if (column < data.num_features) {
          const double value = std::stod(cell, &used);
          if (!std::isfinite(value)) throw std::invalid_argument("non-finite");
          data.features.push_back(value);
        } else {
          const int label = std::stoi(cell, &used);
          if (label < 0) throw std::invalid_argument("negative label");
          max_label = std::max(max_label, label);
          data.labels.push_back(label);
        }
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError("dataset csv line " + std::to_string(line_no) +
                          ": bad value '" + cell + "' in column " +
                          header[std::min(column, header.size() - 1)]);
      }
      ++column;
    }
    if (column != header.size()) {
      throw ConfigError("dataset csv line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " columns, got " +
                        std::to_string(column));
    }
  }
  if (data.labels.empty()) throw ConfigError("dataset csv: no samples");
  data.num_classes = num_classes > 0 ? num_classes : max_label + 1;
  if (max_label >= data.num_classes) {
    throw ConfigError("dataset csv: label " + std::to_string(max_label) +
                      " outside [0, " + std::to_string(data.num_classes) + ")");
  }
  return data;
}

Dataset LoadDatasetCsvFile(const std::string& path, int num_classes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("dataset csv: cannot open '" + path + "'");
  return LoadDatasetCsv(in, num_classes);
}

}  // namespace probit
