#include "cardumen/minilang/types.hpp"

#include <stdexcept>

namespace cardumen::mini {

Type Type::Function(std::vector<Type> params, Type result) {
  Type t(BaseType::Fun);
  t.sig_ = std::make_shared<const Signature>(
      Signature{std::move(params), std::vector<Type>{std::move(result)}});
  return t;
}

const std::vector<Type>& Type::params() const {
  if (!sig_) throw std::logic_error("params() on non-function type");
  return sig_->params;
}

const Type& Type::result() const {
  if (!sig_) throw std::logic_error("result() on non-function type");
  return sig_->result.front();
}

std::string Type::short_name() const {
  switch (base_) {
    case BaseType::Unknown: return "Unknown";
    case BaseType::Int: return "Int";
    case BaseType::Float: return "Float";
    case BaseType::Bool: return "Bool";
    case BaseType::String: return "String";
    case BaseType::Void: return "Void";
    case BaseType::Fun: return "Fun";
  }
  return "Unknown";
}

std::string Type::str() const {
  if (base_ != BaseType::Fun) return short_name();
  std::string out = "Fun(";
  for (std::size_t i = 0; i < sig_->params.size(); ++i) {
    if (i > 0) out += ", ";
    out += sig_->params[i].str();
  }
  out += "): ";
  out += result().str();
  return out;
}

bool operator==(const Type& a, const Type& b) {
  if (a.base_ != b.base_) return false;
  if (a.base_ != BaseType::Fun) return true;
  return a.sig_->params == b.sig_->params && a.result() == b.result();
}

}  // namespace cardumen::mini
