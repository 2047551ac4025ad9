#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ssyn/ast.hpp"

namespace ssyn {

// Ordered labeled tree over which the edit distance is defined. "run" is a
// labeled root; if/else branch lists sit under explicit "then"/"else" nodes
// so that distance zero coincides with structural equality of programs.
struct LabeledTree {
  std::string label;
  std::vector<LabeledTree> children;
};

LabeledTree to_labeled_tree(const ProgramAst& ast);
int tree_size(const LabeledTree& t);

// Minimal number of unit-cost node insertions, deletions and relabelings
// transforming one ordered tree into the other (Zhang-Shasha).
int tree_edit_distance(const LabeledTree& a, const LabeledTree& b);
int tree_edit_distance(const ProgramAst& a, const ProgramAst& b);

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> ids,
                 std::vector<std::vector<double>> values);

  static DistanceMatrix parse_csv(const std::string& text);
  static DistanceMatrix load_csv(const std::string& path);
  std::string to_csv() const;

  bool contains(const std::string& id) const;
  // Throws std::out_of_range when an id is missing.
  double distance(const std::string& id_a, const std::string& id_b) const;
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<double>> values_;
};

using CodeMetric =
    std::function<double(const ProgramAst&, const ProgramAst&)>;

// alpha * edit + (1 - alpha) * embedding distance; ids are the canonical
// serializations of the two codes.
double combined_distance(const ProgramAst& a, const ProgramAst& b,
                         const CodeMetric& edit_metric,
                         const DistanceMatrix& emb, double alpha);

// Index of the option closest to `observed`; ties go to the lowest index.
std::size_t nearest_option(const std::vector<ProgramAst>& options,
                           const ProgramAst& observed,
                           const CodeMetric& metric);

}  // namespace ssyn
