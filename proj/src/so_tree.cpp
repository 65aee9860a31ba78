#include "coso/so_tree.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <sstream>

#include "coso/errors.hpp"

namespace coso {

std::string node_name(const std::vector<int>& ids, bool super_user) {
  const bool wide = std::any_of(ids.begin(), ids.end(), [](int id) { return id >= 10 || id < 0; });
  std::string out = super_user ? "s" : "u";
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k && wide) out += "_";
    out += std::to_string(ids[k]);
  }
  return out;
}

namespace {

std::vector<int> sorted_ids(const EntropyOracle& oracle, UserSet s) {
  auto ids = oracle.ids_of(s);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

SoTree build_tree(const EntropyOracle& oracle, const SoPlan& plan) {
  SoTree tree;
  tree.model = plan.model;
  // Current top node for each block of users; starts as singletons.
  std::map<UserSet::Mask, std::string> top;
  for (int id : sorted_ids(oracle, oracle.ground())) {
    const int i = oracle.index_of(id);
    tree.nodes.push_back({node_name({id}, false), {id}, 0, Rational(0)});
    top[UserSet::single(i).mask()] = tree.nodes.back().name;
  }

  const RateVector zero(static_cast<std::size_t>(oracle.size()), Rational(0));
  for (std::size_t k = 0; k < plan.stages.size(); ++k) {
    const SoStage& st = plan.stages[k];
    std::vector<UserSet> targets = st.targets;
    std::sort(targets.begin(), targets.end(), [](UserSet a, UserSet b) { return a.canonical_less(b); });
    for (auto c : targets) {
      std::vector<UserSet> children;
      for (const auto& [mask, name] : top) {
        if (UserSet(mask).subset_of(c)) children.emplace_back(mask);
      }
      if (children.size() < 2) continue;  // already merged earlier
      std::sort(children.begin(), children.end(), [](UserSet a, UserSet b) { return a.canonical_less(b); });
      const auto ids = sorted_ids(oracle, c);
      TreeNode node{node_name(ids, true), ids, static_cast<int>(k + 1), st.alpha};
      for (auto ch : children) {
        tree.edges.push_back({top[ch.mask()], node.name, node.stage, sum_over(st.rates, ch)});
        top.erase(ch.mask());
      }
      top[c.mask()] = node.name;
      tree.nodes.push_back(std::move(node));
    }
  }
  return tree;
}

namespace {

std::string join(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t k = 0; k < ids.size(); ++k) s += (k ? "," : "") + std::to_string(ids[k]);
  return s;
}

std::vector<int> split_ids(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

std::string to_dot(const SoTree& tree) {
  std::ostringstream out;
  out << "digraph so_tree {\n";
  out << "  graph [model=\"" << to_string(tree.model) << "\", rankdir=BT];\n";
  for (const auto& n : tree.nodes) {
    out << "  \"" << n.name << "\" [";
    if (n.stage == 0) {
      out << "label=\"user " << n.members.front() << "\"";
    } else {
      out << "label=\"super-user " << join(n.members) << "\\nalpha = " << to_string(n.alpha) << "\"";
    }
    out << ", members=\"" << join(n.members) << "\", stage=" << n.stage << ", alpha=\"" << to_string(n.alpha)
        << "\"];\n";
  }
  for (const auto& e : tree.edges) {
    const std::string who = e.child.substr(1);
    out << "  \"" << e.child << "\" -> \"" << e.parent << "\" [label=\"r" << who << "^(" << e.stage
        << ") = " << to_string(e.rate) << "\", stage=" << e.stage << ", rate=\"" << to_string(e.rate) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

SoTree parse_dot(const std::string& text) {
  static const std::regex graph_re(R"re(^\s*graph \[model="(aco|nco)".*\];\s*$)re");
  static const std::regex node_re(
      R"re(^\s*"([^"]+)" \[label="[^"]*", members="([0-9,-]+)", stage=([0-9]+), alpha="([^"]+)"\];\s*$)re");
  static const std::regex edge_re(
      R"re(^\s*"([^"]+)" -> "([^"]+)" \[label="[^"]*", stage=([0-9]+), rate="([^"]+)"\];\s*$)re");
  SoTree tree;
  std::istringstream in(text);
  std::string line;
  bool opened = false;
  bool closed = false;
  std::smatch m;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!opened) {
      if (line != "digraph so_tree {") throw InstanceError("not an SO tree document");
      opened = true;
    } else if (line == "}") {
      closed = true;
    } else if (std::regex_match(line, m, graph_re)) {
      tree.model = parse_model(m[1]);
    } else if (std::regex_match(line, m, node_re)) {
      tree.nodes.push_back({m[1], split_ids(m[2]), std::stoi(m[3]), parse_rational(m[4].str())});
    } else if (std::regex_match(line, m, edge_re)) {
      tree.edges.push_back({m[1], m[2], std::stoi(m[3]), parse_rational(m[4].str())});
    } else {
      throw InstanceError("unrecognized tree line: " + line);
    }
  }
  if (!closed) throw InstanceError("unterminated SO tree document");
  return tree;
}

}  // namespace coso
