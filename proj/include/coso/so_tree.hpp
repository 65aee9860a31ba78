#pragma once

#include <string>
#include <vector>

#include "coso/so_planner.hpp"

namespace coso {

struct TreeNode {
  std::string name;          // "u4", "s45", "s1_12" when some id has two digits
  std::vector<int> members;  // user ids, ascending
  int stage = 0;             // 0 for users; k for super-users formed at stage k
  Rational alpha;            // merge point of a super-user
  bool operator==(const TreeNode&) const = default;
};

struct TreeEdge {
  std::string child;
  std::string parent;
  int stage = 0;
  Rational rate;  // aggregate r^(k) over the child's members
  bool operator==(const TreeEdge&) const = default;
};

// Agglomerative SO tree of a plan: users at the bottom, one super-user per
// newly formed target.
struct SoTree {
  Model model = Model::kAco;
  std::vector<TreeNode> nodes;
  std::vector<TreeEdge> edges;
  bool operator==(const SoTree&) const = default;
};

std::string node_name(const std::vector<int>& ids, bool super_user);

SoTree build_tree(const EntropyOracle& oracle, const SoPlan& plan);

std::string to_dot(const SoTree& tree);
// Reads back the output of to_dot; throws InstanceError on anything else.
SoTree parse_dot(const std::string& text);

}  // namespace coso
