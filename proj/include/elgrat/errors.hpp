#ifndef ELGRAT_ERRORS_HPP
#define ELGRAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace elgrat {

struct mesh_error : std::runtime_error {
  explicit mesh_error(const std::string& what) : std::runtime_error(what) {}
};

struct solve_error : std::runtime_error {
  explicit solve_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace elgrat

#endif
