#ifndef WCFG_ERRORS_HPP
#define WCFG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wcfg {

// Stable error codes. The CLI prints these as `error[<code>]: <message>`
// and exits 1, so scripts can match on the code string.
enum class Errc {
  invalid_params,
  unbounded_derivations,
  foreign_rule,
  malformed_shape,
  has_unary_rules,
  has_nullary_rules,
  no_convergence,
  not_glct_shape,
  star_divergence,
  nullary_in_treebank,
  parse_error,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace wcfg

#endif  // WCFG_ERRORS_HPP
