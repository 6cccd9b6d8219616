#include "mlr/snapshot.hpp"

#include <fstream>
#include <json.hpp>

#include "mlr/csv.hpp"
#include "mlr/errors.hpp"

namespace mlr {

StateSnapshot make_snapshot(const EstimatorState& state) {
  StateSnapshot s;
  s.n = state.n;
  s.theta = state.theta;
  s.p_upper = state.P.packed_upper();
  s.q = state.q;
  s.r = state.r;
  return s;
}

EstimatorState restore_state(const StateSnapshot& snap) {
  EstimatorState st;
  st.n = snap.n;
  st.theta = snap.theta;
  st.P = SymMatrix::from_packed_upper(snap.theta.size(), snap.p_upper);
  st.q = snap.q;
  st.r = snap.r;
  st.beta = snap.q * snap.theta;
  return st;
}

std::vector<std::string> snapshot_columns(int d) {
  std::vector<std::string> cols;
  cols.push_back("n");
  for (int i = 0; i < d; ++i) cols.push_back("theta_" + std::to_string(i));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      cols.push_back("p_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  cols.push_back("q");
  cols.push_back("r");
  return cols;
}

void write_snapshots_csv(const std::string& path,
                         const std::vector<StateSnapshot>& snaps, int d) {
  Table t;
  t.columns = snapshot_columns(d);
  const std::size_t tri = static_cast<std::size_t>(d) * (d + 1) / 2;
  for (const StateSnapshot& s : snaps) {
    if (s.theta.size() != static_cast<std::size_t>(d) ||
        s.p_upper.size() != tri) {
      throw ConfigError("snapshot: dimension mismatch at n = " +
                        std::to_string(s.n));
    }
    std::vector<double> row;
    row.reserve(t.columns.size());
    row.push_back(static_cast<double>(s.n));
    for (int i = 0; i < d; ++i) row.push_back(s.theta[i]);
    for (double v : s.p_upper) row.push_back(v);
    row.push_back(s.q);
    row.push_back(s.r);
    t.append_row(row);
  }
  write_csv(path, t);
}

std::vector<StateSnapshot> read_snapshots_csv(const std::string& path) {
  const Table t = read_csv(path);
  int d = 0;
  while (t.column_index("theta_" + std::to_string(d)) >= 0) ++d;
  if (d == 0) throw IoError("snapshot csv: no theta_* columns in " + path);
  if (t.columns != snapshot_columns(d)) {
    throw IoError("snapshot csv: unexpected header layout in " + path);
  }

  const std::size_t tri = static_cast<std::size_t>(d) * (d + 1) / 2;
  std::vector<StateSnapshot> out;
  out.reserve(t.rows.size());
  // Columns are contiguous by construction, so pull rows positionally.
  std::vector<std::vector<double>> cols;
  for (const std::string& c : t.columns) cols.push_back(t.numeric_column(c));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    StateSnapshot s;
    std::size_t k = 0;
    s.n = static_cast<std::int64_t>(cols[k++][r]);
    s.theta = Vector::zeros(d);
    for (int i = 0; i < d; ++i) s.theta[i] = cols[k++][r];
    s.p_upper.resize(tri);
    for (std::size_t i = 0; i < tri; ++i) s.p_upper[i] = cols[k++][r];
    s.q = cols[k++][r];
    s.r = cols[k++][r];
    out.push_back(std::move(s));
  }
  return out;
}

void write_snapshots_json(const std::string& path,
                          const std::vector<StateSnapshot>& snaps) {
  nlohmann::json arr = nlohmann::json::array();
  for (const StateSnapshot& s : snaps) {
    nlohmann::json rec;
    rec["n"] = s.n;
    rec["theta"] = s.theta.entries();
    rec["p_upper"] = s.p_upper;
    rec["q"] = s.q;
    rec["r"] = s.r;
    arr.push_back(std::move(rec));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << arr.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path);
}

std::vector<StateSnapshot> read_snapshots_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  nlohmann::json arr;
  try {
    f >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("snapshot json: parse failure in " + path + ": " + e.what());
  }
  if (!arr.is_array()) throw IoError("snapshot json: expected a top-level array");

  std::vector<StateSnapshot> out;
  out.reserve(arr.size());
  for (const auto& rec : arr) {
    StateSnapshot s;
    s.n = rec.at("n").get<std::int64_t>();
    const auto th = rec.at("theta").get<std::vector<double>>();
    s.theta = Vector::zeros(static_cast<int>(th.size()));
    for (std::size_t i = 0; i < th.size(); ++i) {
      s.theta[static_cast<int>(i)] = th[i];
    }
    s.p_upper = rec.at("p_upper").get<std::vector<double>>();
    s.q = rec.at("q").get<double>();
    s.r = rec.at("r").get<double>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mlr
