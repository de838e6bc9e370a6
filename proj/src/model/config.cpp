#include "xnose/model/config.hpp"

namespace xnose::model {

CallPattern CallPattern::parse(std::string_view text) {
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos) return CallPattern{"", std::string(text)};
  return CallPattern{std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

std::string CallPattern::to_string() const {
  return receiver.empty() ? callee : receiver + "." + callee;
}

}  // namespace xnose::model
