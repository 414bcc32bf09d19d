#include "choqroof/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "choqroof/errors.hpp"

namespace choqroof {

namespace {

Complex complex_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(what + ": matrix entries must be [re, im] number pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json complex_to_json(const Complex& z) {
  return Json::array({round12(z.real()), round12(z.imag())});
}

Matrix matrix_from_json(const Json& j, int rows, int cols, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw ValidationError(what + ": matrix must have " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ValidationError(what + ": matrix rows must have " + std::to_string(cols) +
                            " entries");
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[k], what);
  }
  return m;
}

int positive_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw ValidationError(what + " must be a positive integer");
  return static_cast<int>(j.get<long long>());
}

bool object_free(const Json& j) {
  if (j.is_object()) return false;
  if (j.is_array())
    for (const Json& c : j)
      if (!object_free(c)) return false;
  return true;
}

void pretty(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<size_t>(depth + 1), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad_in + Json(it.key()).dump() + ": ";
      pretty(it.value(), out, depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    out += pad + "}";
    return;
  }
  if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (object_free(j)) {
      const std::string flat = j.dump();
      if (flat.size() <= 120) {
        out += flat;
        return;
      }
    }
    out += "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      out += pad_in;
      pretty(j[i], out, depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    out += pad + "]";
    return;
  }
  out += j.dump();
}

}  // namespace

std::string pretty_json(const Json& j) {
  std::string out;
  pretty(j, out, 0);
  out += '\n';
  return out;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  if (x == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json state_to_json(const DensityMatrix& rho, std::optional<std::pair<int, int>> dims) {
  Json j;
  j["dim"] = rho.dim();
  if (dims) j["dims"] = Json::array({dims->first, dims->second});
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

Json ensemble_to_json(const Ensemble& e) {
  Json j;
  Json weights = Json::array();
  for (double w : e.weights) weights.push_back(round12(w));
  j["weights"] = std::move(weights);
  Json states = Json::array();
  for (const DensityMatrix& rho : e.atoms) states.push_back(state_to_json(rho));
  j["states"] = std::move(states);
  return j;
}

Json plan_to_json(const TransitionPlan& plan) {
  Json rows = Json::array();
  for (const std::vector<double>& row : plan.t) {
    Json r = Json::array();
    for (double x : row) r.push_back(round12(x));
    rows.push_back(std::move(r));
  }
  return rows;
}

LoadedState parse_state(const Json& j) {
  if (!j.is_object()) throw ValidationError("state: expected a JSON object");
  if (!j.contains("dim")) throw ValidationError("state: missing \"dim\"");
  if (!j.contains("matrix")) throw ValidationError("state: missing \"matrix\"");
  const int dim = positive_int(j["dim"], "state: \"dim\"");
  LoadedState out;
  out.state = DensityMatrix::from_matrix(matrix_from_json(j["matrix"], dim, dim, "state"));
  if (j.contains("dims")) {
    const Json& d = j["dims"];
    if (!d.is_array() || d.size() != 2)
      throw ValidationError("state: \"dims\" must be a [dA, dB] pair");
    const int dA = positive_int(d[0], "state: \"dims\"");
    const int dB = positive_int(d[1], "state: \"dims\"");
    if (dA * dB != dim)
      throw ValidationError("state: \"dims\" product must equal \"dim\"");
    out.dims = std::make_pair(dA, dB);
  }
  return out;
}

Ensemble parse_ensemble(const Json& j) {
  if (!j.is_object()) throw ValidationError("ensemble: expected a JSON object");
  if (!j.contains("weights")) throw ValidationError("ensemble: missing \"weights\"");
  if (!j.contains("states")) throw ValidationError("ensemble: missing \"states\"");
  const Json& weights = j["weights"];
  const Json& states = j["states"];
  if (!weights.is_array() || !states.is_array() || weights.size() != states.size())
    throw ValidationError("ensemble: \"weights\" and \"states\" must be arrays of equal length");
  if (weights.empty()) throw ValidationError("ensemble: must contain at least one state");
  Ensemble e;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (!weights[i].is_number())
      throw ValidationError("ensemble: weights must be numbers");
    e.weights.push_back(weights[i].get<double>());
    e.atoms.push_back(parse_state(states[i]).state);
  }
  e.validate();
  return e;
}

KrausChannel parse_channel(const Json& j) {
  if (!j.is_object()) throw ValidationError("channel: expected a JSON object");
  for (const char* key : {"input_dim", "output_dim", "kraus"})
    if (!j.contains(key))
      throw ValidationError(std::string("channel: missing \"") + key + "\"");
  KrausChannel chan;
  chan.input_dim = positive_int(j["input_dim"], "channel: \"input_dim\"");
  chan.output_dim = positive_int(j["output_dim"], "channel: \"output_dim\"");
  const Json& kraus = j["kraus"];
  if (!kraus.is_array() || kraus.empty())
    throw ValidationError("channel: \"kraus\" must be a nonempty array");
  for (const Json& op : kraus)
    chan.kraus.push_back(matrix_from_json(op, chan.output_dim, chan.input_dim, "channel"));
  chan.validate();
  return chan;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError("invalid JSON in file: " + path);
  return j;
}

LoadedState load_state(const std::string& path) { return parse_state(load_json(path)); }

Ensemble load_ensemble(const std::string& path) { return parse_ensemble(load_json(path)); }

KrausChannel load_channel(const std::string& path) { return parse_channel(load_json(path)); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw ValidationError("failed writing file: " + path);
}

}  // namespace choqroof
