#ifndef DISCLOCUS_IO_HPP
#define DISCLOCUS_IO_HPP

#include "disclocus/classify.hpp"
#include "disclocus/realpath.hpp"
#include "disclocus/sampler.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace disclocus {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// %.17g; round-trips every finite double.
std::string format_double(double v);

// Dataset CSV: header p_1,...,p_k,label,category,line_id.
void write_dataset_csv(const std::filesystem::path& path, const std::vector<LabeledSample>& samples);
std::vector<LabeledSample> read_dataset_csv(const std::filesystem::path& path);

// Solutions sidecar: a header record, then one JSON record per sample in
// dataset order ({"index": i, "solutions": [[...], ...] | null}).
void write_solutions(const std::filesystem::path& path, const std::vector<LabeledSample>& samples);
/// Attaches stored solutions to `samples` (which must match the sidecar's count).
void read_solutions(const std::filesystem::path& path, std::vector<LabeledSample>& samples);

void write_lines(const std::filesystem::path& path, const std::vector<WitnessLine>& lines);
std::vector<WitnessLine> read_lines(const std::filesystem::path& path);

void write_generic_start(const std::filesystem::path& path, const GenericStart& start, const std::string& model);
GenericStart read_generic_start(const std::filesystem::path& path, const std::string& model);

void write_classifier(const std::filesystem::path& path, const Classifier& model);
Classifier read_classifier(const std::filesystem::path& path);

void write_grid_csv(const std::filesystem::path& path, const Grid& grid);
/// Binary P6 image, one pixel per cell, highest y in the top row.
void write_grid_ppm(const std::filesystem::path& path, const Grid& grid);

void write_benchmark_csv(const std::filesystem::path& path, const BenchmarkSummary& summary);

/// Appends `row_name,acc_1,...` to a train-by-test results table, writing the
/// header `train,<test_1>,...` on first use. An existing header must match.
void append_results_row(const std::filesystem::path& path, const std::string& row_name,
                        const std::vector<std::string>& test_names, const std::vector<double>& accuracies);

/// Sidecar naming shared by the writer and the readers.
std::filesystem::path sidecar(const std::filesystem::path& path, const std::string& suffix);

}  // namespace disclocus

#endif  // DISCLOCUS_IO_HPP
