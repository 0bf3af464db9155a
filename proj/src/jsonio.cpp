#include "jsonio.hpp"

#include <json.hpp>

namespace amm {

using nlohmann::json;

namespace {

json wrap(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat unwrap_cmat(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw Error(ErrorCode::kParseError, "matrix: expected array of rows");
  const int nr = int(rows.size());
  const int nc = int(rows[0].size());
  CMat m(nr, nc);
  for (int i = 0; i < nr; ++i) {
    if (int(rows[i].size()) != nc)
      throw Error(ErrorCode::kParseError, "matrix: ragged rows");
    for (int j = 0; j < nc; ++j) {
      const json& e = rows[i][j];
      if (!e.is_array() || e.size() != 2)
        throw Error(ErrorCode::kParseError,
                    "matrix entry: expected [re, im] at row " +
                        std::to_string(i));
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::kParseError, "malformed JSON input");
  return j;
}

void check_version(const json& j) {
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kSchemaVersion)
    throw Error(ErrorCode::kParseError,
                "missing or unsupported schema_version");
}

json wrap(const BellScenario& s) {
  return {{"nx", s.nx}, {"ny", s.ny}, {"na", s.na}, {"nb", s.nb}};
}

BellScenario unwrap_scenario(const json& j) {
  BellScenario s{j.at("nx").get<int>(), j.at("ny").get<int>(),
                 j.at("na").get<int>(), j.at("nb").get<int>()};
  s.validate();
  return s;
}

// packed lower triangle, column-major: index of (i, j) with i >= j
size_t packed_lower(int d, int i, int j) {
  size_t off = 0;
  for (int c = 0; c < j; ++c) off += size_t(d - c);
  return off + size_t(i - j);
}

}  // namespace

std::string to_json(const CMat& m) { return wrap(m).dump(); }

CMat cmat_from_json(const std::string& text) {
  return unwrap_cmat(parse(text));
}

std::string to_json(const BellScenario& s) { return wrap(s).dump(); }

BellScenario scenario_from_json(const std::string& text) {
  return unwrap_scenario(parse(text));
}

std::string to_json(const CorrelationTable& t) {
  const BellScenario& s = t.scenario;
  json p = json::array();
  for (int x = 0; x < s.nx; ++x) {
    json px = json::array();
    for (int y = 0; y < s.ny; ++y) {
      json pxy = json::array();
      for (int a = 0; a < s.na; ++a) {
        json pa = json::array();
        for (int b = 0; b < s.nb; ++b) pa.push_back(t.at(x, y, a, b));
        pxy.push_back(std::move(pa));
      }
      px.push_back(std::move(pxy));
    }
    p.push_back(std::move(px));
  }
  json j{{"schema_version", kSchemaVersion},
         {"scenario", wrap(t.scenario)},
         {"p", std::move(p)}};
  return j.dump();
}

CorrelationTable table_from_json(const std::string& text) {
  json j = parse(text);
  check_version(j);
  CorrelationTable t(unwrap_scenario(j.at("scenario")));
  const BellScenario& s = t.scenario;
  const json& p = j.at("p");
  try {
    for (int x = 0; x < s.nx; ++x)
      for (int y = 0; y < s.ny; ++y)
        for (int a = 0; a < s.na; ++a)
          for (int b = 0; b < s.nb; ++b)
            t.at(x, y, a, b) = p.at(x).at(y).at(a).at(b).get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("table p[x][y][a][b]: ") + e.what());
  }
  return t;
}

std::string to_json(const BellFunctional& f) {
  const BellScenario& s = f.scenario;
  json beta = json::array();
  for (int x = 0; x < s.nx; ++x) {
    json bx = json::array();
    for (int y = 0; y < s.ny; ++y) {
      json bxy = json::array();
      for (int a = 0; a < s.na; ++a) {
        json ba = json::array();
        for (int b = 0; b < s.nb; ++b) ba.push_back(f.coef(x, y, a, b));
        bxy.push_back(std::move(ba));
      }
      bx.push_back(std::move(bxy));
    }
    beta.push_back(std::move(bx));
  }
  json j{{"schema_version", kSchemaVersion},
         {"scenario", wrap(s)},
         {"beta", std::move(beta)},
         {"local_bound", f.local_bound},
         {"name", f.name}};
  return j.dump();
}

BellFunctional functional_from_json(const std::string& text) {
  json j = parse(text);
  check_version(j);
  BellFunctional f;
  f.scenario = unwrap_scenario(j.at("scenario"));
  f.local_bound = j.at("local_bound").get<double>();
  f.name = j.value("name", "custom");
  const BellScenario& s = f.scenario;
  f.beta.assign(size_t(s.nx) * s.ny * s.na * s.nb, 0.0);
  const json& beta = j.at("beta");
  try {
    for (int x = 0; x < s.nx; ++x)
      for (int y = 0; y < s.ny; ++y)
        for (int a = 0; a < s.na; ++a)
          for (int b = 0; b < s.nb; ++b)
            f.coef(x, y, a, b) = beta.at(x).at(y).at(a).at(b).get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("functional beta[x][y][a][b]: ") + e.what());
  }
  return f;
}

std::string to_json(const StateAssemblage& a) {
  json states = json::array();
  for (int oa = 0; oa < a.n_outcomes(); ++oa) {
    json row = json::array();
    for (int x = 0; x < a.n_settings(); ++x) row.push_back(wrap(a.at(x, oa)));
    states.push_back(std::move(row));
  }
  json j{{"schema_version", kSchemaVersion},
         {"dims", a.dim()},
         {"states", std::move(states)}};
  return j.dump();
}

StateAssemblage state_assemblage_from_json(const std::string& text) {
  json j = parse(text);
  check_version(j);
  const json& states = j.at("states");
  if (!states.is_array() || states.empty() || !states[0].is_array() ||
      states[0].empty())
    throw Error(ErrorCode::kParseError, "assemblage: states[a][x] missing");
  const int na = int(states.size());
  const int nx = int(states[0].size());
  StateAssemblage out;
  out.states.resize(nx);
  for (int a = 0; a < na; ++a) {
    if (int(states[a].size()) != nx)
      throw Error(ErrorCode::kParseError, "assemblage: ragged states");
    for (int x = 0; x < nx; ++x)
      out.states[x].push_back(unwrap_cmat(states[a][x]));
  }
  return out;
}

std::string to_json(const MeasurementAssemblage& m) {
  json povms = json::array();
  for (const Povm& p : m.povms) {
    json elems = json::array();
    for (const CMat& e : p.elements) elems.push_back(wrap(e));
    povms.push_back(std::move(elems));
  }
  json j{{"schema_version", kSchemaVersion}, {"povms", std::move(povms)}};
  return j.dump();
}

MeasurementAssemblage measurement_assemblage_from_json(
    const std::string& text) {
  json j = parse(text);
  check_version(j);
  MeasurementAssemblage out;
  for (const json& povm : j.at("povms")) {
    Povm p;
    for (const json& e : povm) p.elements.push_back(unwrap_cmat(e));
    out.povms.push_back(std::move(p));
  }
  if (out.povms.empty())
    throw Error(ErrorCode::kParseError, "measurement assemblage: no POVMs");
  return out;
}

std::string report_to_json(const RobustnessReport& r, double runtime_ms) {
  json j{{"schema_version", kSchemaVersion},
         {"quantity", r.quantity},
         {"value", r.value},
         {"level", r.level},
         {"status", to_string(r.status)},
         {"gap", r.gap},
         {"primal_residual", r.primal_residual},
         {"dual_residual", r.dual_residual},
         {"iterations", r.iterations},
         {"runtime_ms", runtime_ms},
         {"inputs_digest", r.inputs_digest}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j.dump(2);
}

std::string layout_to_json(const MomentLayout& layout) {
  json words = json::array();
  for (const Word& w : layout.row_words) {
    json symbols = json::array();
    for (int s : w) {
      if (s == 0)
        symbols.push_back({{"kind", "identity"}});
      else
        symbols.push_back({{"kind", "projector"},
                           {"y", layout.algebra.setting_of(s) + 1},
                           {"b", layout.algebra.outcome_of(s) + 1}});
    }
    words.push_back(std::move(symbols));
  }
  json entries = json::array();
  for (int r = 0; r < layout.dim; ++r) {
    json row = json::array();
    for (int c = 0; c < layout.dim; ++c) {
      const EntryClass& e = layout.at(r, c);
      switch (e.kind) {
        case EntryKind::kTrace: row.push_back({{"class", "trace"}}); break;
        case EntryKind::kZero: row.push_back({{"class", "zero"}}); break;
        case EntryKind::kObserved:
          row.push_back(
              {{"class", "observed"}, {"y", e.y + 1}, {"b", e.b + 1}});
          break;
        default:
          row.push_back({{"class", "free"}, {"u", e.u_index}});
      }
    }
    entries.push_back(std::move(row));
  }
  json j{{"schema_version", kSchemaVersion},
         {"level", layout.level},
         {"dim", layout.dim},
         {"n_free", layout.n_free},
         {"row_words", std::move(words)},
         {"entries", std::move(entries)}};
  return j.dump();
}

std::string program_to_json(const ConicProgram& p) {
  json blocks = json::array();
  for (size_t k = 0; k < p.block_dims.size(); ++k) {
    int d = p.block_dims[k];
    std::vector<double> lower(size_t(d) * (d + 1) / 2, 0.0);
    for (const auto& e : p.constant_entries)
      if (e.block == int(k)) lower[packed_lower(d, e.col, e.row)] += e.value;
    blocks.push_back({{"dim", d}, {"constant_lower", lower}});
  }
  json vars = json::array();
  for (const auto& v : p.var_entries) {
    json entries = json::array();
    for (const auto& e : v) entries.push_back({e.block, e.row, e.col, e.value});
    vars.push_back(std::move(entries));
  }
  json eqs = json::array();
  for (const auto& eq : p.equalities) {
    json terms = json::array();
    for (auto [var, c] : eq.terms) terms.push_back({var, c});
    eqs.push_back({{"terms", std::move(terms)}, {"rhs", eq.rhs}});
  }
  json j{{"schema_version", kSchemaVersion},
         {"n_vars", p.n_vars},
         {"objective", p.objective},
         {"objective_constant", p.objective_constant},
         {"blocks", std::move(blocks)},
         {"var_entries", std::move(vars)},
         {"equalities", std::move(eqs)}};
  return j.dump();
}

std::string digest(const std::string& text) {
  // FNV-1a, printed as 16 hex digits
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

}  // namespace amm
