#include "wkh/groups.hpp"

#include <algorithm>
#include <numeric>

#include "wkh/linalg.hpp"

namespace wkh {

GroupTable::GroupTable(int order, std::vector<int> table, std::vector<std::string> labels)
    : order_(order), table_(std::move(table)), labels_(std::move(labels)) {
  auto fail = [](const std::string& why) { throw Error("invalid multiplication table: " + why); };
  if (order_ < 1) fail("order must be positive");
  if (table_.size() != static_cast<std::size_t>(order_) * static_cast<std::size_t>(order_))
    fail("table must have order^2 entries");
  for (int v : table_)
    if (v < 0 || v >= order_) fail("entry out of range");
  for (int g = 0; g < order_; ++g) {
    std::vector<bool> row(static_cast<std::size_t>(order_)), col(static_cast<std::size_t>(order_));
    for (int h = 0; h < order_; ++h) {
      row[static_cast<std::size_t>(mul(g, h))] = true;
      col[static_cast<std::size_t>(mul(h, g))] = true;
    }
    if (std::find(row.begin(), row.end(), false) != row.end() || std::find(col.begin(), col.end(), false) != col.end())
      fail("not a Latin square");
  }
  for (int e = 0; e < order_ && identity_ < 0; ++e) {
    bool ok = true;
    for (int g = 0; g < order_ && ok; ++g) ok = mul(e, g) == g && mul(g, e) == g;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) fail("no identity element");
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      for (int c = 0; c < order_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) fail("not associative");
  inverse_.resize(static_cast<std::size_t>(order_));
  for (int g = 0; g < order_; ++g)
    for (int h = 0; h < order_; ++h)
      if (mul(g, h) == identity_) inverse_[static_cast<std::size_t>(g)] = h;
  if (labels_.empty())
    for (int g = 0; g < order_; ++g) labels_.push_back("g" + std::to_string(g));
  if (labels_.size() != static_cast<std::size_t>(order_)) fail("label count does not match order");
}

GroupTable GroupTable::cyclic(int n) {
  if (n < 1) throw Error("invalid multiplication table: cyclic order must be positive");
  std::vector<int> t(static_cast<std::size_t>(n * n));
  std::vector<std::string> labels;
  for (int g = 0; g < n; ++g) {
    labels.push_back(std::to_string(g));
    for (int h = 0; h < n; ++h) t[static_cast<std::size_t>(g * n + h)] = (g + h) % n;
  }
  return GroupTable(n, std::move(t), std::move(labels));
}

GroupTable GroupTable::symmetric(int n) {
  if (n < 1) throw Error("invalid multiplication table: symmetric degree must be positive");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const int order = static_cast<int>(perms.size());
  std::vector<int> t(static_cast<std::size_t>(order * order));
  std::vector<std::string> labels;
  for (int g = 0; g < order; ++g) {
    std::string s;
    for (int v : perms[static_cast<std::size_t>(g)]) s += std::to_string(v + 1);
    labels.push_back(s);
    for (int h = 0; h < order; ++h) {
      // (g h)(i) = g(h(i))
      std::vector<int> c(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        c[static_cast<std::size_t>(i)] = perms[static_cast<std::size_t>(g)][static_cast<std::size_t>(perms[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)])];
      t[static_cast<std::size_t>(g * order + h)] =
          static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  }
  return GroupTable(order, std::move(t), std::move(labels));
}

bool GroupTable::abelian() const {
  for (int g = 0; g < order_; ++g)
    for (int h = 0; h < order_; ++h)
      if (mul(g, h) != mul(h, g)) return false;
  return true;
}

}  // namespace wkh
