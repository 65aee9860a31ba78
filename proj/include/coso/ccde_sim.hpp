#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coso/entropy_oracle.hpp"
#include "coso/galois.hpp"
#include "coso/so_planner.hpp"

namespace coso {

// A user or fused super-user in the packet system.
struct SimNode {
  int id;                  // user id; a super-user takes its least member id
  std::string name;        // "u4", "s45"
  std::vector<int> users;  // original user ids, ascending
  Subspace source;         // what the node observed privately
  Subspace knowledge;      // source plus everything overheard
};

struct Transmission {
  int stage;
  int sender;  // node id
  Row row;
};

// Users holding packets as row vectors over GF(q). Bit labels and GF(2) rows
// are lifted to GF(2^8), which leaves all ranks unchanged.
struct PacketSystem {
  unsigned field = 256;
  std::size_t block = 1;  // n
  std::size_t dim = 0;    // universe dimension, labels (or columns) times n
  std::vector<SimNode> nodes;
  std::vector<Transmission> transcript;

  const GaloisField& gf() const { return galois_field(field); }
  std::size_t index_of(int node_id) const;
  Subspace universe() const;
  // Entropy oracle of the current nodes: H(X) = rank(sum of knowledge) / n.
  EntropyOracle derived_oracle() const;
};

PacketSystem instantiate(const EntropyOracle& oracle, std::size_t block);

enum class Coding { kDeterministic, kRandom };

struct TargetResult {
  std::vector<int> target;  // node ids
  std::vector<std::pair<int, std::size_t>> sent;  // (node id, rows)
  bool decoded = false;
};

struct StageResult {
  int stage = 0;
  std::vector<TargetResult> targets;
  std::vector<std::pair<int, std::size_t>> ranks;  // (node id, knowledge rank) after the stage
  std::size_t rows = 0;
};

struct SimReport {
  std::size_t block = 1;
  std::vector<StageResult> stages;
  std::size_t transmissions = 0;
  Rational expected;  // n times the final sum-rate
  bool decoded = false;
};

// Smallest n making every rate of the plan integral after scaling.
std::size_t block_length_for(const SoPlan& plan);

// Runs the plan stage by stage. Each sender transmits n * (r^(k) - r^(k-1))
// rows drawn from its knowledge inside the target's source span, round-robin
// by ascending id; every node overhears. Throws DomainError when scaled rates
// are not integral or decrease.
SimReport simulate_plan(PacketSystem& system, const EntropyOracle& oracle, const SoPlan& plan, Coding coding,
                        std::uint64_t seed);

// Replaces the nodes of `members` (node ids) by one node holding the sum of
// their knowledge. Throws DomainError unless each member already knows the
// sources of all the others.
PacketSystem fuse_superuser(const PacketSystem& system, const std::vector<int>& members);

struct RecursiveRound {
  std::vector<int> nodes;   // node ids before the round
  bool global = false;      // final round over all remaining nodes
  std::vector<int> subset;  // node ids attaining omniscience
  Rational alpha;           // alpha-hat, or R_ACO for the global round
  std::vector<std::pair<int, Rational>> rates;  // per node id
  std::size_t rows = 0;
  bool decoded = false;
};

struct RecursiveTrace {
  std::vector<RecursiveRound> rounds;
  std::size_t transmissions = 0;
  bool omniscient = false;  // every original user decodes the universe
};

// Two-stage SO applied repeatedly, fusing each complimentary subset into a
// super-user, until a global round finishes.
RecursiveTrace recursive_two_stage(PacketSystem system, Coding coding, std::uint64_t seed);

}  // namespace coso
