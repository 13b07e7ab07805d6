#include "gemcmc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gemcmc {

namespace {

std::runtime_error parse_error(const std::string& name, std::int64_t line,
                               const std::string& what) {
  return std::runtime_error(name + ": line " + std::to_string(line) + ": " +
                            what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

bool parse_double(const std::string& raw, double& out) {
  std::size_t begin = raw.find_first_not_of(" \t");
  if (begin == std::string::npos) return false;
  const std::size_t end = raw.find_last_not_of(" \t") + 1;
  const char* first = raw.data() + begin;
  const char* last = raw.data() + end;
  const auto result = std::from_chars(first, last, out);
  return result.ec == std::errc() && result.ptr == last;
}

void append_double(std::string& out, double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  out += os.str();
}

}  // namespace

Matrix read_matrix_csv(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::int64_t line_number = 0;
  std::int64_t columns = -1;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], row[j])) {
        if (first_content_line) {
          numeric = false;  // header line
          break;
        }
        throw parse_error(name, line_number,
                          "cannot parse '" + fields[j] + "' in column " +
                              std::to_string(j + 1));
      }
    }
    first_content_line = false;
    if (!numeric) continue;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!std::isfinite(row[j])) {
        throw parse_error(name, line_number,
                          "non-finite value in column " + std::to_string(j + 1));
      }
    }
    if (columns == -1) {
      columns = static_cast<std::int64_t>(row.size());
    } else if (static_cast<std::int64_t>(row.size()) != columns) {
      throw parse_error(name, line_number,
                        "expected " + std::to_string(columns) +
                            " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(name + ": no numeric rows");
  Matrix out(static_cast<std::int64_t>(rows.size()), columns);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::int64_t j = 0; j < columns; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix_csv(in, path.string());
}

std::string matrix_to_csv(const Matrix& rows,
                          const std::vector<std::string>& header) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) out += ',';
      out += header[j];
    }
    out += '\n';
  }
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (j) out += ',';
      append_double(out, rows(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const Matrix& rows, const std::filesystem::path& path,
                      const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << matrix_to_csv(rows, header);
}

PriorSampleSet parse_prior_samples(const std::filesystem::path& path) {
  return PriorSampleSet::from_rows(read_matrix_csv(path));
}

void write_chain(const ChainOutput& output, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto n = output.samples.rows();
  const auto d = output.samples.cols();
  out << "# gemcmc-chain v1 dim=" << d << " n=" << n
      << " burn_in=" << output.burn_in << '\n';
  out << "iteration,anchor";
  for (Eigen::Index j = 0; j < d; ++j) out << ",x" << j;
  out << ",accepted,log_lik\n";
  out << std::setprecision(17);
  for (Eigen::Index t = 0; t < n; ++t) {
    out << t << ',' << output.anchors[t];
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << output.samples(t, j);
    out << ',' << static_cast<int>(output.accepted[t]) << ','
        << output.log_liks[t] << '\n';
  }
}

ChainOutput read_chain(std::istream& in, const std::string& name) {
  std::string line;
  std::int64_t line_number = 0;

  if (!std::getline(in, line)) throw parse_error(name, 1, "empty file");
  ++line_number;
  std::int64_t d = -1, n = -1, burn_in = -1;
  {
    std::istringstream hs(line);
    std::string tag, magic, version;
    hs >> tag >> magic >> version;
    if (tag != "#" || magic != "gemcmc-chain") {
      throw parse_error(name, 1, "not a chain file");
    }
    std::string kv;
    while (hs >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq);
      const std::int64_t value = std::stoll(kv.substr(eq + 1));
      if (key == "dim") d = value;
      else if (key == "n") n = value;
      else if (key == "burn_in") burn_in = value;
    }
    if (d < 1 || n < 1 || burn_in < 0) {
      throw parse_error(name, 1, "incomplete chain header");
    }
  }
  if (!std::getline(in, line)) throw parse_error(name, 2, "missing column header");
  ++line_number;

  ChainOutput out;
  out.samples.resize(n, d);
  out.anchors.resize(n);
  out.accepted.resize(n);
  out.log_liks.resize(n);
  out.burn_in = burn_in;

  std::int64_t t = 0;
  double accepted_total = 0.0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    if (t >= n) throw parse_error(name, line_number, "more records than declared");
    const auto fields = split_csv_line(line);
    if (static_cast<std::int64_t>(fields.size()) != d + 4) {
      throw parse_error(name, line_number,
                        "expected " + std::to_string(d + 4) + " fields, got " +
                            std::to_string(fields.size()));
    }
    double value;
    if (!parse_double(fields[0], value) || value != static_cast<double>(t)) {
      throw parse_error(name, line_number, "bad iteration index");
    }
    if (!parse_double(fields[1], value)) {
      throw parse_error(name, line_number, "bad anchor");
    }
    out.anchors[t] = static_cast<int>(value);
    for (std::int64_t j = 0; j < d; ++j) {
      if (!parse_double(fields[2 + j], out.samples(t, j))) {
        throw parse_error(name, line_number, "bad coordinate x" + std::to_string(j));
      }
    }
    if (!parse_double(fields[2 + d], value) || (value != 0.0 && value != 1.0)) {
      throw parse_error(name, line_number, "bad accepted flag");
    }
    out.accepted[t] = static_cast<std::uint8_t>(value);
    accepted_total += value;
    std::string ll_field = fields[3 + d];
    if (!parse_double(ll_field, out.log_liks[t])) {
      throw parse_error(name, line_number, "bad log_lik");
    }
    ++t;
  }
  if (t != n) {
    throw parse_error(name, line_number + 1,
                      "truncated file: expected " + std::to_string(n) +
                          " records, got " + std::to_string(t));
  }
  out.acceptance_rate = accepted_total / static_cast<double>(n);
  return out;
}

ChainOutput read_chain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_chain(in, path.string());
}

nlohmann::json graph_to_json(const KnnGraph& graph) {
  nlohmann::json adjacency = nlohmann::json::array();
  for (int i = 0; i < graph.size(); ++i) {
    const auto row = graph.neighbors(i);
    adjacency.push_back(std::vector<int>(row.begin(), row.end()));
  }
  return {{"format", "gemcmc-knn-graph"},
          {"version", 1},
          {"k", graph.k()},
          {"nodes", graph.size()},
          {"adjacency", std::move(adjacency)}};
}

KnnGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "gemcmc-knn-graph") {
    throw std::runtime_error("graph_from_json: not a graph document");
  }
  const int k = j.at("k").get<int>();
  auto adjacency = j.at("adjacency").get<std::vector<std::vector<int>>>();
  if (j.contains("nodes") &&
      j.at("nodes").get<std::size_t>() != adjacency.size()) {
    throw std::runtime_error("graph_from_json: node count mismatch");
  }
  return KnnGraph(k, std::move(adjacency));
}

void write_graph(const KnnGraph& graph, const std::filesystem::path& path) {
  write_json(graph_to_json(graph), path);
}

KnnGraph read_graph(const std::filesystem::path& path) {
  return graph_from_json(read_json(path));
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

void write_manifest(const std::filesystem::path& out_dir,
                    const nlohmann::json& config) {
  nlohmann::json manifest = config;
  manifest["library_version"] = std::string(kVersion);
  write_json(manifest, out_dir / "manifest.json");
}

}  // namespace gemcmc
