#ifndef MATFREE_MODEL_IO_HPP
#define MATFREE_MODEL_IO_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "matfree/block_model.hpp"

namespace matfree {

namespace detail {

template <class T>
T scalar_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_scalar<T>(v.get<std::string>());
  if (v.is_number_integer()) return T(static_cast<long long>(v.get<long long>()));
  if (v.is_number_float()) {
    if constexpr (numeric_profile<T>::exact)
      throw std::invalid_argument(
          "model: fractional values must be written as strings like \"1/3\" in the rational "
          "profile");
    else
      return T(v.get<double>());
  }
  throw std::invalid_argument("model: entry is neither a number nor a string");
}

}  // namespace detail

template <class T>
BlockModel<T> model_from_json(const nlohmann::json& j) {
  if (!j.contains("U") || !j.contains("D"))
    throw std::invalid_argument("model: fields U and D are required");
  const auto& ju = j.at("U");
  int r = static_cast<int>(ju.size());
  if (r < 1) throw std::invalid_argument("model: U must be a nonempty square matrix");
  SquareMat<T> u(r);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(ju.at(i).size()) != r)
      throw std::invalid_argument("model: U must be square (row " + std::to_string(i + 1) +
                                  " has the wrong length)");
    for (int k = 0; k < r; ++k) u(i, k) = detail::scalar_from_json<T>(ju.at(i).at(k));
  }
  const auto& jd = j.at("D");
  if (static_cast<int>(jd.size()) != r)
    throw std::invalid_argument("model: D must have one entry per block");
  std::vector<T> d(r);
  for (int k = 0; k < r; ++k) d[k] = detail::scalar_from_json<T>(jd.at(k));
  bool relaxed = j.value("relaxed", false);
  if (j.contains("r") && j.at("r").get<int>() != r)
    throw std::invalid_argument("model: field r disagrees with the dimension of U");
  return BlockModel<T>(std::move(u), std::move(d), relaxed);
}

template <class T>
BlockModel<T> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json<T>(j);
}

// Deterministic content hash of a model (FNV-1a over the canonical text).
template <class T>
std::string model_hash(const BlockModel<T>& m) {
  std::ostringstream os;
  os << "r=" << m.r << ";U=";
  for (int i = 0; i < m.r; ++i)
    for (int j = 0; j < m.r; ++j) os << scalar_to_string(m.U(i, j)) << ",";
  os << ";D=";
  for (int j = 0; j < m.r; ++j) os << scalar_to_string(m.D[j]) << ",";
  os << ";relaxed=" << (m.relaxed ? 1 : 0);
  std::string s = os.str();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace matfree

#endif  // MATFREE_MODEL_IO_HPP
