#include "ebransac/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ebransac {

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

DataPoint make_point(std::vector<double> input) {
    return DataPoint{std::move(input), std::nullopt};
}

DataPoint make_point(std::vector<double> input, std::vector<double> target) {
    return DataPoint{std::move(input), std::move(target)};
}

void validate(const Dataset& data) {
    if (data.points.empty()) {
        throw std::invalid_argument("dataset must contain at least one point");
    }
    const std::size_t in_dim = data.points.front().input.size();
    const bool has_target = data.points.front().target.has_value();
    const std::size_t out_dim = has_target ? data.points.front().target->size() : 0;
    for (std::size_t mu = 0; mu < data.points.size(); ++mu) {
        const DataPoint& p = data.points[mu];
        if (p.input.size() != in_dim || p.target.has_value() != has_target ||
            (has_target && p.target->size() != out_dim)) {
            throw std::invalid_argument("inconsistent point shape at index " +
                                        std::to_string(mu));
        }
        for (double v : p.input) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("non-finite input component at index " +
                                            std::to_string(mu));
            }
        }
        if (has_target) {
            for (double v : *p.target) {
                if (!std::isfinite(v)) {
                    throw std::invalid_argument("non-finite target component at index " +
                                                std::to_string(mu));
                }
            }
        }
    }
}

void write_csv(const Dataset& data, std::ostream& out) {
    validate(data);
    const std::size_t in_dim = data.points.front().input.size();
    const bool has_target = data.points.front().target.has_value();
    const std::size_t out_dim = has_target ? data.points.front().target->size() : 0;
    for (std::size_t i = 0; i < in_dim; ++i) {
        if (i) out << ',';
        out << "x_" << i;
    }
    for (std::size_t i = 0; i < out_dim; ++i) {
        out << ",y_" << i;
    }
    out << '\n';
    for (const DataPoint& p : data.points) {
        for (std::size_t i = 0; i < in_dim; ++i) {
            if (i) out << ',';
            out << format_value(p.input[i]);
        }
        for (std::size_t i = 0; i < out_dim; ++i) {
            out << ',' << format_value((*p.target)[i]);
        }
        out << '\n';
    }
}

Dataset read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty CSV stream");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t in_dim = 0, out_dim = 0;
    for (const std::string& name : split_csv_line(line)) {
        if (name.rfind("x_", 0) == 0) {
            ++in_dim;
        } else if (name.rfind("y_", 0) == 0) {
            ++out_dim;
        } else {
            throw std::invalid_argument("unrecognized CSV column: " + name);
        }
    }
    if (in_dim == 0) throw std::invalid_argument("CSV has no x_* columns");
    Dataset data;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != in_dim + out_dim) {
            throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) +
                                        " fields, expected " +
                                        std::to_string(in_dim + out_dim));
        }
        DataPoint p;
        p.input.reserve(in_dim);
        for (std::size_t i = 0; i < in_dim; ++i) p.input.push_back(std::stod(fields[i]));
        if (out_dim > 0) {
            std::vector<double> target;
            target.reserve(out_dim);
            for (std::size_t i = 0; i < out_dim; ++i) {
                target.push_back(std::stod(fields[in_dim + i]));
            }
            p.target = std::move(target);
        }
        data.points.push_back(std::move(p));
    }
    validate(data);
    return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& csv_path,
                  const std::string& extra_meta_json) {
    {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("cannot open " + csv_path.string());
        write_csv(data, out);
    }
    nlohmann::json meta = nlohmann::json::object();
    if (!extra_meta_json.empty()) meta = nlohmann::json::parse(extra_meta_json);
    if (data.seed.has_value()) meta["seed"] = *data.seed;
    std::filesystem::path meta_path = csv_path;
    meta_path += ".meta.json";
    std::ofstream out(meta_path);
    if (!out) throw std::runtime_error("cannot open " + meta_path.string());
    out << meta.dump(2) << '\n';
}

Dataset load_dataset(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path.string());
    Dataset data = read_csv(in);
    std::filesystem::path meta_path = csv_path;
    meta_path += ".meta.json";
    if (std::filesystem::exists(meta_path)) {
        std::ifstream meta_in(meta_path);
        const auto meta = nlohmann::json::parse(meta_in);
        if (meta.contains("seed")) data.seed = meta["seed"].get<std::uint64_t>();
    }
    return data;
}

}  // namespace ebransac
