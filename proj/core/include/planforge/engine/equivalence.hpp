#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "planforge/engine/ground.hpp"

namespace planforge::engine {

/// Renames reference-domain vocabulary into candidate-domain vocabulary.
/// Empty maps mean identity. Must cover both sides one-to-one (same
/// predicate arities, same action parameter counts) or the comparison
/// raises VocabularyMismatch.
struct NameMapping {
  std::map<std::string, std::string> predicates;
  std::map<std::string, std::string> actions;
};

struct SamplerConfig {
  int n_walks = 200;
  int max_len = 20;
  std::uint64_t seed = 0;
};

struct EquivalenceReport {
  enum class Status { AgreeOnSample, Disagree };

  Status status = Status::AgreeOnSample;
  int walks_run = 0;
  std::vector<std::string> sequence;  // witness, reference vocabulary
  int step = -1;                      // index of the diverging step
  std::string detail;

  bool agree() const { return status == Status::AgreeOnSample; }
  std::string to_json_string() const;
};

/// Sampled operational comparison of two domains on one problem. Walks
/// alternate between valid random walks (actions drawn from the reference
/// domain's applicable set) and uniform random action sequences. At every
/// visited state the full applicable set and the goal status of both
/// domains are compared, so any divergence reachable by the sample is
/// reported with a concrete witness sequence, never a false Disagree.
EquivalenceReport operational_equivalence(const pddl::Domain& reference,
                                          const pddl::Domain& candidate,
                                          const pddl::Problem& problem,
                                          const SamplerConfig& config = {},
                                          const NameMapping& mapping = {});

}  // namespace planforge::engine
