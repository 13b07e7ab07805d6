#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gemcmc/knn_graph.hpp"
#include "gemcmc/samplers.hpp"
#include "gemcmc/types.hpp"

namespace gemcmc {

/// Rectangular numeric CSV, one sample per row; an optional non-numeric
/// header line is skipped. Errors carry the offending 1-based file line.
Matrix read_matrix_csv(const std::filesystem::path& path);
Matrix read_matrix_csv(std::istream& in, const std::string& name);

/// Full-precision CSV (17 significant digits, lossless round-trip).
void write_matrix_csv(const Matrix& rows, const std::filesystem::path& path,
                      const std::vector<std::string>& header = {});
std::string matrix_to_csv(const Matrix& rows,
                          const std::vector<std::string>& header = {});

PriorSampleSet parse_prior_samples(const std::filesystem::path& path);

/// Chain files are line-delimited records
///   iteration,anchor,x0..x{d-1},accepted,log_lik
/// behind a one-line header carrying dim, record count, and burn-in; the
/// reader streams line by line and reports malformed or truncated input with
/// its line number. Timing fields are not serialized.
void write_chain(const ChainOutput& output, const std::filesystem::path& path);
ChainOutput read_chain(const std::filesystem::path& path);
ChainOutput read_chain(std::istream& in, const std::string& name);

nlohmann::json graph_to_json(const KnnGraph& graph);
KnnGraph graph_from_json(const nlohmann::json& j);
void write_graph(const KnnGraph& graph, const std::filesystem::path& path);
KnnGraph read_graph(const std::filesystem::path& path);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

/// Every CLI run records its command, parameters, and seed next to its
/// outputs; enough to reproduce the run bit for bit.
void write_manifest(const std::filesystem::path& out_dir,
                    const nlohmann::json& config);

}  // namespace gemcmc
