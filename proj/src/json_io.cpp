#include "centrep/json_io.hpp"

#include <cstdint>
#include <cstdio>

namespace centrep {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(rat_to_string(c));
  return out;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected array of rationals");
  Vec out;
  for (const auto& e : j) out.push_back(rat_parse(e.get<std::string>()));
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (const auto& row : m.a) out.push_back(vec_to_json(row));
  return out;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected matrix rows");
  Matrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    const Vec row = vec_from_json(j[i]);
    if (row.size() != m.cols) throw std::invalid_argument("ragged matrix");
    m.a[i] = row;
  }
  return m;
}

}  // namespace

json multivector_to_json(const Multivector& w) {
  json out = json::array();
  for (const auto& [mask, c] : w.terms()) {
    json indices = json::array();
    for (std::size_t i = 0; i < w.ambient_dim(); ++i)
      if (mask & (Multivector::Mask(1) << i)) indices.push_back(i + 1);
    out.push_back({{"indices", indices}, {"coeff", rat_to_string(c)}});
  }
  return out;
}

Multivector multivector_from_json(const json& j, std::size_t ambient_dim) {
  if (!j.is_array()) throw std::invalid_argument("multivector: expected array of terms");
  Multivector w(ambient_dim);
  for (const auto& term : j) {
    Multivector::Mask mask = 0;
    for (const auto& idx : term.at("indices")) {
      const std::size_t i = idx.get<std::size_t>();
      if (i < 1 || i > ambient_dim) throw std::invalid_argument("multivector: index out of range");
      const Multivector::Mask bit = Multivector::Mask(1) << (i - 1);
      if (mask & bit) throw std::invalid_argument("multivector: repeated index");
      mask |= bit;
    }
    w.add_term(mask, rat_parse(term.at("coeff").get<std::string>()));
  }
  return w;
}

json instance_to_json(const Instance& inst) {
  const std::size_t n = inst.dim();
  json omega = json::array();
  for (const auto& [mask, c] : inst.omega.terms()) {
    std::size_t i = 0, j = 0;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (Multivector::Mask(1) << b)) {
        if (i == 0)
          i = b + 1;
        else
          j = b + 1;
      }
    omega.push_back({{"i", i}, {"j", j}, {"c", rat_to_string(c)}});
  }
  json out = {{"spec_version", kSpecVersion},
              {"dim", n},
              {"theta", matrix_to_json(inst.theta.matrix)},
              {"omega", omega},
              {"epsilon", vec_to_json(inst.epsilon)}};
  if (inst.seed) out["seed"] = *inst.seed;
  return out;
}

Instance instance_from_json(const json& j) {
  const std::size_t n = j.at("dim").get<std::size_t>();
  if (n < 2 || n > 31) throw std::invalid_argument("instance: dim out of range");
  Instance inst;
  const Matrix theta = matrix_from_json(j.at("theta"));
  if (theta.rows != n || theta.cols != n)
    throw std::invalid_argument("instance: theta size mismatch");
  inst.theta = NilpotentOperator::from_matrix(theta);
  inst.omega = Multivector(n);
  for (const auto& term : j.at("omega")) {
    const std::size_t a = term.at("i").get<std::size_t>();
    const std::size_t b = term.at("j").get<std::size_t>();
    if (a < 1 || b < 1 || a >= b || b > n)
      throw std::invalid_argument("instance: omega term needs 1 ≤ i < j ≤ dim");
    inst.omega.add_term((Multivector::Mask(1) << (a - 1)) | (Multivector::Mask(1) << (b - 1)),
                        rat_parse(term.at("c").get<std::string>()));
  }
  inst.epsilon = vec_from_json(j.at("epsilon"));
  if (inst.epsilon.size() != n) throw std::invalid_argument("instance: epsilon size mismatch");
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  return inst;
}

json algebra_to_json(const LieAlgebra& l) {
  json brackets = json::array();
  for (const auto& [ij, c] : l.brackets) {
    json coeffs = json::object();
    for (std::size_t k = 0; k < l.dim; ++k)
      if (!is_zero(c[k])) coeffs[std::to_string(k + 1)] = rat_to_string(c[k]);
    brackets.push_back({{"i", ij.first + 1}, {"j", ij.second + 1}, {"coeffs", coeffs}});
  }
  json out = {{"spec_version", kSpecVersion}, {"dim", l.dim}, {"brackets", brackets}};
  if (!l.labels.empty()) out["labels"] = l.labels;
  if (l.u_index && l.z_index)
    out["distinguished"] = {{"u", *l.u_index + 1}, {"z", *l.z_index + 1}};
  return out;
}

LieAlgebra algebra_from_json(const json& j) {
  LieAlgebra l;
  l.dim = j.at("dim").get<std::size_t>();
  if (l.dim < 1 || l.dim > 31) throw std::invalid_argument("algebra: dim out of range");
  for (const auto& b : j.at("brackets")) {
    const std::size_t i = b.at("i").get<std::size_t>();
    const std::size_t jj = b.at("j").get<std::size_t>();
    if (i < 1 || jj <= i || jj > l.dim)
      throw std::invalid_argument("algebra: bracket needs 1 ≤ i < j ≤ dim");
    Vec c = vec_zero(l.dim);
    for (const auto& [key, val] : b.at("coeffs").items()) {
      const std::size_t k = std::stoul(key);
      if (k < 1 || k > l.dim) throw std::invalid_argument("algebra: coefficient index");
      c[k - 1] = rat_parse(val.get<std::string>());
    }
    l.set_bracket(i - 1, jj - 1, c);
  }
  if (j.contains("labels")) l.labels = j.at("labels").get<std::vector<std::string>>();
  if (j.contains("distinguished")) {
    l.u_index = j.at("distinguished").at("u").get<std::size_t>() - 1;
    l.z_index = j.at("distinguished").at("z").get<std::size_t>() - 1;
  }
  return l;
}

json certificate_to_json(const WitnessCertificate& cert, std::size_t ambient_dim,
                         const std::string& hash) {
  json out = {{"spec_version", kSpecVersion},
              {"dim", ambient_dim},
              {"case_tag", case_tag_name(cert.case_tag)},
              {"beta", multivector_to_json(cert.beta)},
              {"alpha", multivector_to_json(cert.alpha)},
              {"gamma", multivector_to_json(cert.gamma)},
              {"checks",
               {{"a", cert.checks.a},
                {"b", cert.checks.b},
                {"c", cert.checks.c},
                {"d", cert.checks.d}}},
              {"used_fallback", cert.used_fallback},
              {"instance_hash", hash}};
  if (cert.N) out["N"] = *cert.N;
  if (cert.M) out["M"] = *cert.M;
  if (cert.P) {
    json pairs = json::array();
    for (const auto& [r, s] : cert.P->pairs)
      pairs.push_back({rat_to_string(r), rat_to_string(s)});
    out["P"] = pairs;
  }
  return out;
}

json decomposition_to_json(const CanonicalDecomposition& d) {
  json uv = json::array();
  for (const auto& b : d.uv_blocks) {
    json u = json::array(), v = json::array();
    for (const auto& x : b.u) u.push_back(vec_to_json(x));
    for (const auto& x : b.v) v.push_back(vec_to_json(x));
    uv.push_back({{"l", b.l}, {"u", u}, {"v", v}});
  }
  json zb = json::array();
  for (const auto& b : d.z_blocks) {
    json z = json::array();
    for (const auto& x : b.z) z.push_back(vec_to_json(x));
    zb.push_back({{"m", b.m}, {"z", z}, {"c", rat_to_string(b.c)}});
  }
  json support = json::array();
  for (const auto& x : d.support.basis) support.push_back(vec_to_json(x));
  return {{"spec_version", kSpecVersion},
          {"dim", d.ambient_dim},
          {"uv_blocks", uv},
          {"z_blocks", zb},
          {"support", support}};
}

std::string instance_hash(const Instance& inst) {
  json j = instance_to_json(inst);
  j.erase("seed");  // the same triple hashes identically however it was found
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace centrep
