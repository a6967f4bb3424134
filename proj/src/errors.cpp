#include "wcfg/errors.hpp"

namespace wcfg {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_params: return "InvalidParams";
    case Errc::unbounded_derivations: return "UnboundedDerivations";
    case Errc::foreign_rule: return "ForeignRule";
    case Errc::malformed_shape: return "MalformedShape";
    case Errc::has_unary_rules: return "HasUnaryRules";
    case Errc::has_nullary_rules: return "HasNullaryRules";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::not_glct_shape: return "NotGLCTShape";
    case Errc::star_divergence: return "StarDivergence";
    case Errc::nullary_in_treebank: return "NullaryInTreebank";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wcfg
