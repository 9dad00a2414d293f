#pragma once

#include <string>
#include <vector>

namespace wkh {

/// Finite group given by its multiplication table; elements are 0..order-1.
class GroupTable {
 public:
  /// Validates closure, associativity, identity and inverses; throws
  /// Error("invalid multiplication table: ...") otherwise.
  GroupTable(int order, std::vector<int> table, std::vector<std::string> labels = {});

  static GroupTable cyclic(int n);
  /// Symmetric group on n letters, permutations in lexicographic order.
  static GroupTable symmetric(int n);

  int order() const { return order_; }
  int mul(int g, int h) const { return table_[static_cast<std::size_t>(g * order_ + h)]; }
  int identity() const { return identity_; }
  int inverse(int g) const { return inverse_[static_cast<std::size_t>(g)]; }
  const std::vector<int>& table() const { return table_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool abelian() const;

 private:
  int order_;
  std::vector<int> table_;
  std::vector<std::string> labels_;
  int identity_ = -1;
  std::vector<int> inverse_;
};

}  // namespace wkh
