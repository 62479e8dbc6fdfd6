// Copyright 2026 The hinand Authors.
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

#ifndef HINAND_RELATION_EMBED_H_
#define HINAND_RELATION_EMBED_H_

#include <cstdint>
#include <vector>

#include "hinand/content_embed.h"
#include "hinand/corpus.h"
#include "hinand/embedding_table.h"
#include "hinand/rng.h"

namespace hinand {

struct WalkConfig {
  int walks_per_node = 10;
  int walk_length = 40;
  double return_param = 1.0;  // p
  double inout_param = 1.0;   // q
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  int dim = 64;
  uint64_t seed = 1;
  int threads = 1;

  void Validate() const;
};

using Walk = std::vector<NodeId>;

// node2vec second-order walks over the whole network, no type constraints.
// Walk w starting at node n draws from its own stream seeded by
// (seed, round, n), so output does not depend on `threads`. Order: round-major,
// then node index.
std::vector<Walk> GenerateWalks(const HeterogeneousNetwork& hin,
                                const WalkConfig& config);

// One walk of at most `length` nodes. The first step is uniform over the
// start node's neighbors; later steps weight the previous node by 1/p, nodes
// adjacent to the previous node by 1, and the rest by 1/q.
Walk SimulateWalk(const HeterogeneousNetwork& hin, NodeId start, int length,
                  double return_param, double inout_param, Rng& rng);

// Skip-gram with negative sampling over walks. Returns a vector for every node,
// keyed by node_id(). Nodes that never occur as a center with context (e.g.
// isolated nodes) keep their random initialization.
EmbeddingTable TrainRelation(const HeterogeneousNetwork& hin,
                             const std::vector<Walk>& walks,
                             const WalkConfig& config,
                             TrainStats* stats = nullptr);

}  // namespace hinand

#endif  // HINAND_RELATION_EMBED_H_
