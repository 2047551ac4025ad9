#include "ssyn/edit_distance.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ssyn/code_json.hpp"

namespace ssyn {

namespace {

void build_tree(const StmtList& body, std::vector<LabeledTree>& out) {
  for (const Stmt& s : body) {
    if (const auto* a = std::get_if<Action>(&s.node)) {
      out.push_back({action_name(a->kind), {}});
    } else if (const auto* r = std::get_if<RepeatUntilGoal>(&s.node)) {
      LabeledTree n{"repeat_until_goal", {}};
      build_tree(r->body, n.children);
      out.push_back(std::move(n));
    } else if (const auto* ie = std::get_if<IfElse>(&s.node)) {
      LabeledTree n{"if_else:" + cond_name(ie->cond), {}};
      LabeledTree then_n{"then", {}};
      build_tree(ie->then_body, then_n.children);
      LabeledTree else_n{"else", {}};
      build_tree(ie->else_body, else_n.children);
      n.children.push_back(std::move(then_n));
      n.children.push_back(std::move(else_n));
      out.push_back(std::move(n));
    } else {
      const auto& io = std::get<IfOnly>(s.node);
      LabeledTree n{"if:" + cond_name(io.cond), {}};
      LabeledTree then_n{"then", {}};
      build_tree(io.then_body, then_n.children);
      n.children.push_back(std::move(then_n));
      out.push_back(std::move(n));
    }
  }
}

// Post-order flattening with leftmost-leaf-descendant indices, as used by
// the Zhang-Shasha dynamic program.
struct FlatTree {
  std::vector<std::string> labels;  // post-order
  std::vector<int> lld;             // leftmost leaf descendant per node
  std::vector<int> keyroots;
};

int flatten(const LabeledTree& t, FlatTree& out) {
  int leftmost = -1;
  for (const LabeledTree& c : t.children) {
    const int l = flatten(c, out);
    if (leftmost < 0) leftmost = l;
  }
  const int index = static_cast<int>(out.labels.size());
  out.labels.push_back(t.label);
  out.lld.push_back(leftmost < 0 ? index : leftmost);
  return out.lld.back();
}

FlatTree make_flat(const LabeledTree& t) {
  FlatTree out;
  flatten(t, out);
  const int n = static_cast<int>(out.labels.size());
  std::vector<bool> is_keyroot(n, true);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (out.lld[j] == out.lld[i]) {
        is_keyroot[i] = false;  // a later node shares the leftmost leaf
        break;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (is_keyroot[i]) out.keyroots.push_back(i);
  }
  return out;
}

}  // namespace

LabeledTree to_labeled_tree(const ProgramAst& ast) {
  LabeledTree root{"run", {}};
  build_tree(ast.body, root.children);
  return root;
}

int tree_size(const LabeledTree& t) {
  int n = 1;
  for (const LabeledTree& c : t.children) n += tree_size(c);
  return n;
}

int tree_edit_distance(const LabeledTree& a, const LabeledTree& b) {
  const FlatTree t1 = make_flat(a);
  const FlatTree t2 = make_flat(b);
  const int n = static_cast<int>(t1.labels.size());
  const int m = static_cast<int>(t2.labels.size());
  std::vector<std::vector<int>> treedist(n, std::vector<int>(m, 0));
  std::vector<std::vector<int>> fd(static_cast<std::size_t>(n) + 1,
                                   std::vector<int>(m + 1, 0));

  for (int ki : t1.keyroots) {
    for (int kj : t2.keyroots) {
      const int li = t1.lld[ki];
      const int lj = t2.lld[kj];
      fd[li][lj] = 0;
      for (int i = li; i <= ki; ++i) fd[i + 1][lj] = fd[i][lj] + 1;
      for (int j = lj; j <= kj; ++j) fd[li][j + 1] = fd[li][j] + 1;
      for (int i = li; i <= ki; ++i) {
        for (int j = lj; j <= kj; ++j) {
          if (t1.lld[i] == li && t2.lld[j] == lj) {
            const int rename = t1.labels[i] == t2.labels[j] ? 0 : 1;
            fd[i + 1][j + 1] = std::min({fd[i][j + 1] + 1, fd[i + 1][j] + 1,
                                         fd[i][j] + rename});
            treedist[i][j] = fd[i + 1][j + 1];
          } else {
            fd[i + 1][j + 1] =
                std::min({fd[i][j + 1] + 1, fd[i + 1][j] + 1,
                          fd[t1.lld[i]][t2.lld[j]] + treedist[i][j]});
          }
        }
      }
    }
  }
  return treedist[n - 1][m - 1];
}

int tree_edit_distance(const ProgramAst& a, const ProgramAst& b) {
  return tree_edit_distance(to_labeled_tree(a), to_labeled_tree(b));
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids,
                               std::vector<std::vector<double>> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.size() != ids_.size()) {
    throw std::invalid_argument("distance matrix is not square");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].size() != ids_.size()) {
      throw std::invalid_argument("distance matrix is not square");
    }
    for (double v : values_[i]) {
      if (v < 0.0) throw std::invalid_argument("negative distance");
    }
  }
}

namespace {

// Minimal CSV with RFC-style quoting; ids may contain commas and quotes.
std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

DistanceMatrix DistanceMatrix::parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty distance matrix");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> ids = parse_csv_line(line);
  std::vector<std::vector<double>> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = parse_csv_line(line);
    if (fields.size() != ids.size()) {
      throw std::runtime_error("distance matrix row width mismatch");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) row.push_back(std::stod(f));
    values.push_back(std::move(row));
  }
  return DistanceMatrix(std::move(ids), std::move(values));
}

DistanceMatrix DistanceMatrix::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string DistanceMatrix::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i > 0) out << ",";
    out << csv_quote(ids_[i]);
  }
  out << "\n";
  for (const auto& row : values_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ",";
      out << row[j];
    }
    out << "\n";
  }
  return out.str();
}

bool DistanceMatrix::contains(const std::string& id) const {
  return std::find(ids_.begin(), ids_.end(), id) != ids_.end();
}

double DistanceMatrix::distance(const std::string& id_a,
                                const std::string& id_b) const {
  const auto ia = std::find(ids_.begin(), ids_.end(), id_a);
  if (ia == ids_.end()) {
    throw std::out_of_range("id missing from distance matrix: " + id_a);
  }
  const auto ib = std::find(ids_.begin(), ids_.end(), id_b);
  if (ib == ids_.end()) {
    throw std::out_of_range("id missing from distance matrix: " + id_b);
  }
  return values_[static_cast<std::size_t>(ia - ids_.begin())]
                [static_cast<std::size_t>(ib - ids_.begin())];
}

double combined_distance(const ProgramAst& a, const ProgramAst& b,
                         const CodeMetric& edit_metric,
                         const DistanceMatrix& emb, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  const double edit = edit_metric(a, b);
  const double embedded = emb.distance(serialize_code(a), serialize_code(b));
  return alpha * edit + (1.0 - alpha) * embedded;
}

std::size_t nearest_option(const std::vector<ProgramAst>& options,
                           const ProgramAst& observed,
                           const CodeMetric& metric) {
  if (options.empty()) throw std::invalid_argument("no options");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double d = metric(options[i], observed);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace ssyn
