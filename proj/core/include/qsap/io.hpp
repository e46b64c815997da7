#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsap/codebook.hpp"
#include "qsap/phy.hpp"
#include "qsap/qln.hpp"

namespace qsap::io {

nlohmann::json to_json(const AccessReport& r);

/// Text-matrix codebook export: first line a '#'-prefixed JSON parameter
/// header, then one 0/1 row per codeword.
void write_codebook(const std::filesystem::path& path, const Codebook& book);

/// Tiny CSV emitter: '#'-prefixed comment lines, one header row, numeric
/// rows. Cells are written with max_digits10 precision.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path,
              const std::vector<std::string>& comments,
              const std::vector<std::string>& header);
    ~CsvWriter();

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

private:
    struct Impl;
    Impl* impl_;
};

/// Debug dump of the decoder features: per-subcarrier count and occupancy,
/// then the correlation digit matrix.
void write_features_csv(const std::filesystem::path& path,
                        const FeatureVector& f);

/// Raw observation dump: little-endian complex64 (float32 re, float32 im),
/// subcarrier-major then symbol then antenna, plus a JSON sidecar at
/// path + ".json" describing the layout.
void write_observation(const std::filesystem::path& path,
                       const Observation& obs);

nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace qsap::io
