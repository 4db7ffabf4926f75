#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ebransac {

/// One record of a dataset: an input vector plus an optional target vector
/// (absent in unsupervised scenarios).
struct DataPoint {
    std::vector<double> input;
    std::optional<std::vector<double>> target;
};

DataPoint make_point(std::vector<double> input);
DataPoint make_point(std::vector<double> input, std::vector<double> target);

/// Ordered collection of data points. The index of a point is meaningful and
/// preserved by serialization. `seed` records the generator seed when the
/// dataset is synthetic.
struct Dataset {
    std::vector<DataPoint> points;
    std::optional<std::uint64_t> seed;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const DataPoint& operator[](std::size_t i) const { return points[i]; }
};

/// Validates finiteness of every component and N >= 1; throws
/// std::invalid_argument naming the offending index.
void validate(const Dataset& data);

/// CSV with header row x_0,...,x_{n-1}[,y_0,...]; row order defines the
/// point index.
void write_csv(const Dataset& data, std::ostream& out);
Dataset read_csv(std::istream& in);

/// Writes `path` (CSV) plus a `<path>.meta.json` sidecar holding the seed and
/// any extra metadata supplied as a serialized JSON object string.
void save_dataset(const Dataset& data, const std::filesystem::path& csv_path,
                  const std::string& extra_meta_json = "");
Dataset load_dataset(const std::filesystem::path& csv_path);

}  // namespace ebransac
