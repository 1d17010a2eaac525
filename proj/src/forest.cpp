#include "ted/forest.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <utility>

namespace ted {

Label LabelTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return Label{it->second};
  const auto id = static_cast<std::int32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return Label{id};
}

const std::string& LabelTable::name(Label label) const {
  if (label.id < 0 || static_cast<std::size_t>(label.id) >= names_.size()) {
    throw std::out_of_range("unknown label id " + std::to_string(label.id));
  }
  return names_[static_cast<std::size_t>(label.id)];
}

LabelTable LabelTable::alphabetic(int count) {
  LabelTable table;
  for (int id = 0; id < count; ++id) {
    std::string name;
    int k = id;
    do {
      name.insert(name.begin(), static_cast<char>('a' + k % 26));
      k = k / 26 - 1;
    } while (k >= 0);
    table.intern(name);
  }
  return table;
}

Forest::Forest() : label_(1), parent_(1, -1), children_(1) { finalize(); }

Forest Forest::from_children(const std::vector<Label>& labels,
                             const std::vector<std::vector<std::int32_t>>& children,
                             const std::vector<std::int32_t>& roots) {
  const auto n = static_cast<int>(labels.size());
  if (children.size() != labels.size()) {
    throw std::invalid_argument("from_children: labels and children differ in length");
  }
  Forest f;
  f.label_.assign(static_cast<std::size_t>(n) + 1, Label{});
  f.parent_.assign(static_cast<std::size_t>(n) + 1, kVirtualRoot);
  f.parent_[0] = -1;
  f.children_.assign(static_cast<std::size_t>(n) + 1, {});

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  NodeId next = 1;
  // Explicit stack of (temporary id, new parent id), pushed in reverse so
  // that pops follow preorder.
  std::vector<std::pair<std::int32_t, NodeId>> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.emplace_back(*it, kVirtualRoot);
  while (!stack.empty()) {
    auto [t, par] = stack.back();
    stack.pop_back();
    if (t < 0 || t >= n) throw std::invalid_argument("from_children: node id out of range");
    if (seen[static_cast<std::size_t>(t)]) {
      throw std::invalid_argument("from_children: node reachable twice (not a forest)");
    }
    seen[static_cast<std::size_t>(t)] = 1;
    const NodeId u = next++;
    f.label_[u] = labels[static_cast<std::size_t>(t)];
    f.parent_[u] = par;
    f.children_[par].push_back(u);
    const auto& ch = children[static_cast<std::size_t>(t)];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.emplace_back(*it, u);
  }
  if (next != n + 1) throw std::invalid_argument("from_children: unreachable nodes");
  f.finalize();
  return f;
}

void Forest::finalize() {
  const auto count = label_.size();
  rank_.assign(count, 0);
  size_.assign(count, 1);
  depth_.assign(count, 0);
  child_prefix_.assign(count, {});
  // Preorder numbering: parents precede children, so one backward pass
  // accumulates sizes and one forward pass assigns depths.
  for (std::size_t u = count - 1; u >= 1; --u) size_[parent_[u]] += size_[u];
  size_[0] -= 1;  // the virtual root itself is not counted
  for (std::size_t u = 1; u < count; ++u) depth_[u] = depth_[parent_[u]] + 1;
  for (std::size_t u = 0; u < count; ++u) {
    const auto& ch = children_[u];
    auto& prefix = child_prefix_[u];
    prefix.assign(ch.size() + 1, 0);
    for (std::size_t k = 0; k < ch.size(); ++k) {
      rank_[ch[k]] = static_cast<int>(k) + 1;
      prefix[k + 1] = prefix[k] + size_[ch[k]];
    }
  }
}

int Forest::children_size(NodeId u, int x, int y) const {
  if (x > y) return 0;
  const auto& prefix = child_prefix_.at(u);
  if (x < 1 || y >= static_cast<int>(prefix.size())) {
    throw std::out_of_range("children_size: child range out of range");
  }
  return prefix[y] - prefix[x - 1];
}

bool Forest::is_ancestor(NodeId a, NodeId b) const {
  if (a == b) return false;
  if (a == kVirtualRoot) return b != kVirtualRoot;
  if (b == kVirtualRoot) return false;
  // Preorder: descendants of a occupy (a, a + size(a)).
  return b > a && b < a + size_.at(a);
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, LabelTable& labels) : text_(text), labels_(labels) {}

  Forest run() {
    std::vector<std::int32_t> roots = parse_list(/*nested=*/false);
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return Forest::from_children(labels_out_, children_, roots);
  }

 private:
  std::vector<std::int32_t> parse_list(bool nested) {
    std::vector<std::int32_t> items;
    skip_ws();
    if (at_end() || (nested && peek() == ')')) return items;
    items.push_back(parse_tree());
    for (;;) {
      skip_ws();
      if (at_end() || peek() != ',') break;
      ++pos_;
      items.push_back(parse_tree());
    }
    return items;
  }

  std::int32_t parse_tree() {
    skip_ws();
    const std::size_t start = pos_;
    while (!at_end() && is_label_char(peek())) ++pos_;
    if (pos_ == start) {
      if (at_end()) fail("expected label, found end of input");
      fail("expected label, found '" + std::string(1, peek()) + "'");
    }
    const auto id = static_cast<std::int32_t>(labels_out_.size());
    labels_out_.push_back(labels_.intern(text_.substr(start, pos_ - start)));
    children_.emplace_back();
    skip_ws();
    if (!at_end() && peek() == '(') {
      ++pos_;
      auto kids = parse_list(/*nested=*/true);
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      ++pos_;
      children_[static_cast<std::size_t>(id)] = std::move(kids);
    }
    return id;
  }

  static bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())) != 0) ++pos_;
  }
  [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
  [[nodiscard]] char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  LabelTable& labels_;
  std::size_t pos_ = 0;
  std::vector<Label> labels_out_;
  std::vector<std::vector<std::int32_t>> children_;
};

void serialize_into(const Forest& f, const LabelTable& labels, NodeId u, std::string& out) {
  out += labels.name(f.label(u));
  if (f.degree(u) == 0) return;
  out += '(';
  bool first = true;
  for (NodeId c : f.children(u)) {
    if (!first) out += ',';
    first = false;
    serialize_into(f, labels, c, out);
  }
  out += ')';
}

/// Builds a forest from a subset of nodes given in increasing (preorder)
/// order; each kept node hangs under its nearest kept ancestor.
Forest induced(const Forest& f, const std::vector<NodeId>& keep) {
  const auto n = keep.size();
  std::vector<Label> labels(n);
  std::vector<std::vector<std::int32_t>> children(n);
  std::vector<std::int32_t> roots;
  std::vector<std::int32_t> local(static_cast<std::size_t>(f.size()) + 1, -1);
  for (std::size_t t = 0; t < n; ++t) {
    const NodeId u = keep[t];
    local[u] = static_cast<std::int32_t>(t);
    labels[t] = f.label(u);
    NodeId p = f.parent(u);
    while (p != kVirtualRoot && local[p] < 0) p = f.parent(p);
    if (p == kVirtualRoot) {
      roots.push_back(static_cast<std::int32_t>(t));
    } else {
      children[static_cast<std::size_t>(local[p])].push_back(static_cast<std::int32_t>(t));
    }
  }
  return Forest::from_children(labels, children, roots);
}

}  // namespace

Forest parse_forest(std::string_view text, LabelTable& labels) {
  return Parser(text, labels).run();
}

std::string serialize_forest(const Forest& forest, const LabelTable& labels) {
  std::string out;
  bool first = true;
  for (NodeId r : forest.roots()) {
    if (!first) out += ',';
    first = false;
    serialize_into(forest, labels, r, out);
  }
  return out;
}

BiOrderIndex bi_order(const Forest& forest) {
  const int n = forest.size();
  BiOrderIndex idx;
  idx.seq.reserve(static_cast<std::size_t>(2 * n));
  idx.l.assign(static_cast<std::size_t>(n) + 1, 0);
  idx.r.assign(static_cast<std::size_t>(n) + 1, 0);
  // Stack of (node, next child index); entering records l, leaving records r.
  std::vector<std::pair<NodeId, std::size_t>> stack;
  for (NodeId root : forest.roots()) {
    stack.emplace_back(root, 0);
    idx.seq.push_back(root);
    idx.l[root] = static_cast<int>(idx.seq.size());
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& ch = forest.children(u);
      if (next < ch.size()) {
        const NodeId c = ch[next++];
        idx.seq.push_back(c);
        idx.l[c] = static_cast<int>(idx.seq.size());
        stack.emplace_back(c, 0);
      } else {
        idx.seq.push_back(u);
        idx.r[u] = static_cast<int>(idx.seq.size()) + 1;
        stack.pop_back();
      }
    }
  }
  idx.r[0] = 2 * n + 1;
  return idx;
}

std::vector<NodeId> subforest_nodes(const Forest& forest, const BiOrderIndex& order,
                                    SubforestRef ref) {
  const int limit = 2 * forest.size() + 1;
  if (ref.l < 1 || ref.r > limit || ref.l > ref.r) {
    throw std::out_of_range("subforest range [" + std::to_string(ref.l) + ", " +
                            std::to_string(ref.r) + ") invalid for |F| = " +
                            std::to_string(forest.size()));
  }
  std::vector<NodeId> nodes;
  for (NodeId u = 1; u <= forest.size(); ++u) {
    if (ref.l <= order.l[u] && order.r[u] <= ref.r) nodes.push_back(u);
  }
  return nodes;
}

Forest subforest(const Forest& forest, const BiOrderIndex& order, SubforestRef ref) {
  return induced(forest, subforest_nodes(forest, order, ref));
}

Forest sync_slice(const Forest& forest, SyncSubforest s) {
  if (s.vroot < 0 || s.vroot > forest.size()) {
    throw std::out_of_range("sync_slice: vroot out of range");
  }
  const int d = forest.degree(s.vroot);
  if (s.x < 1 || s.y > d || s.x > s.y + 1) {
    throw std::out_of_range("sync_slice: child range [" + std::to_string(s.x) + ", " +
                            std::to_string(s.y) + "] invalid for degree " + std::to_string(d));
  }
  if (s.empty()) return Forest{};
  // The slice is contiguous in preorder.
  const NodeId first = forest.child(s.vroot, s.x);
  const int count = forest.children_size(s.vroot, s.x, s.y);
  std::vector<NodeId> keep(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) keep[static_cast<std::size_t>(t)] = first + t;
  return induced(forest, keep);
}

SyncSubforest whole(const Forest& forest) {
  return SyncSubforest{kVirtualRoot, 1, forest.degree(kVirtualRoot)};
}

Forest remove_node(const Forest& forest, NodeId u) {
  if (u < 1 || u > forest.size()) throw std::out_of_range("remove_node: node out of range");
  std::vector<NodeId> keep;
  keep.reserve(static_cast<std::size_t>(forest.size()) - 1);
  for (NodeId v = 1; v <= forest.size(); ++v) {
    if (v != u) keep.push_back(v);
  }
  return induced(forest, keep);
}

Forest concatenate(const Forest& a, const Forest& b) {
  const int na = a.size();
  const int nb = b.size();
  std::vector<Label> labels(static_cast<std::size_t>(na + nb));
  std::vector<std::vector<std::int32_t>> children(static_cast<std::size_t>(na + nb));
  std::vector<std::int32_t> roots;
  auto add = [&](const Forest& f, int offset) {
    for (NodeId u = 1; u <= f.size(); ++u) {
      const auto t = static_cast<std::size_t>(offset + u - 1);
      labels[t] = f.label(u);
      for (NodeId c : f.children(u)) children[t].push_back(offset + c - 1);
    }
    for (NodeId r : f.roots()) roots.push_back(offset + r - 1);
  };
  add(a, 0);
  add(b, na);
  return Forest::from_children(labels, children, roots);
}

Forest random_forest(int n, int alphabet, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("random_forest: negative size");
  if (alphabet < 1) throw std::invalid_argument("random_forest: alphabet must be >= 1");
  if (n == 0) return Forest{};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_label(0, alphabet - 1);
  std::vector<Label> labels(static_cast<std::size_t>(n));
  std::vector<std::vector<std::int32_t>> children(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    labels[static_cast<std::size_t>(k)] = Label{pick_label(rng)};
    if (k == 0) continue;
    const int parent = std::uniform_int_distribution<int>(0, k - 1)(rng);
    auto& ch = children[static_cast<std::size_t>(parent)];
    const auto slot = std::uniform_int_distribution<std::size_t>(0, ch.size())(rng);
    ch.insert(ch.begin() + static_cast<std::ptrdiff_t>(slot), k);
  }
  return Forest::from_children(labels, children, {0});
}

}  // namespace ted
