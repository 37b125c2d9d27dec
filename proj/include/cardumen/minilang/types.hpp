#pragma once

#include <memory>
#include <string>
#include <vector>

namespace cardumen::mini {

enum class BaseType { Unknown, Int, Float, Bool, String, Void, Fun };

/// Static type of a Mini expression or declaration. Function types carry
/// their signature; equality is structural.
class Type {
 public:
  Type() = default;
  explicit Type(BaseType base) : base_(base) {}

  static Type Int() { return Type(BaseType::Int); }
  static Type Float() { return Type(BaseType::Float); }
  static Type Bool() { return Type(BaseType::Bool); }
  static Type String() { return Type(BaseType::String); }
  static Type Void() { return Type(BaseType::Void); }
  static Type Function(std::vector<Type> params, Type result);

  BaseType base() const { return base_; }
  bool known() const { return base_ != BaseType::Unknown; }
  bool is_function() const { return base_ == BaseType::Fun; }
  bool is_value() const {
    return base_ != BaseType::Unknown && base_ != BaseType::Void;
  }

  // Only meaningful for function types.
  const std::vector<Type>& params() const;
  const Type& result() const;

  /// Full spelling as written in source, e.g. `Fun(Float, Int): Bool`.
  std::string str() const;
  /// Short name used in placeholder identifiers (`Int`, `Fun`, ...).
  std::string short_name() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b) {
    return a.str() < b.str();
  }

 private:
  struct Signature {
    std::vector<Type> params;
    std::vector<Type> result;  // exactly one element
  };

  BaseType base_ = BaseType::Unknown;
  std::shared_ptr<const Signature> sig_;
};

}  // namespace cardumen::mini
