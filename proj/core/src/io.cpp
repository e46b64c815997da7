#include "qsap/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qsap::io {

using nlohmann::json;

nlohmann::json to_json(const AccessReport& r) {
    json j;
    j["attack_label"] = to_string(r.label);
    j["user_ids"] = r.user_ids;
    j["codeword_indices"] = r.codeword_indices;
    j["phases"] = r.phases;
    j["status"] = r.status == AccessReport::Status::success ? "success"
                                                            : "decode_failure";
    return j;
}

void write_codebook(const std::filesystem::path& path, const Codebook& book) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot open " + path.string());
    const auto& p = book.params();
    json header = {{"q", p.q},
                   {"k", p.k},
                   {"order", p.order},
                   {"clusters", p.clusters},
                   {"inner_length", p.inner_length()},
                   {"binary_length", p.binary_length()},
                   {"codewords", book.size()}};
    out << "# " << header.dump() << "\n";
    for (std::size_t j = 0; j < book.size(); ++j)
        out << book.column(j).to_string() << "\n";
    if (!out) throw std::runtime_error("io: write failed for " + path.string());
}

struct CsvWriter::Impl {
    std::ofstream out;
    std::size_t n_cols = 0;
};

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& comments,
                     const std::vector<std::string>& header)
    : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out)
        throw std::runtime_error("io: cannot open " + path.string());
    for (const auto& c : comments) impl_->out << "# " << c << "\n";
    for (std::size_t i = 0; i < header.size(); ++i)
        impl_->out << (i ? "," : "") << header[i];
    impl_->out << "\n";
    impl_->n_cols = header.size();
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) {
        std::ostringstream s;
        s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
        cells.push_back(s.str());
    }
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != impl_->n_cols)
        throw std::invalid_argument("io: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i)
        impl_->out << (i ? "," : "") << cells[i];
    impl_->out << "\n";
    if (!impl_->out) throw std::runtime_error("io: csv write failed");
}

void write_features_csv(const std::filesystem::path& path,
                        const FeatureVector& f) {
    const std::size_t b = f.counts.size();
    std::vector<std::string> header = {"subcarrier", "count", "occupied"};
    for (std::size_t j = 0; j < b; ++j)
        header.push_back("d" + std::to_string(j));
    CsvWriter csv(path, {}, header);
    for (std::size_t i = 0; i < b; ++i) {
        std::vector<std::string> cells = {std::to_string(i),
                                          std::to_string(f.counts[i]),
                                          f.occupancy.test(i) ? "1" : "0"};
        for (std::size_t j = 0; j < b; ++j)
            cells.push_back(std::to_string(
                f.d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        csv.row(cells);
    }
}

namespace {

void put_float_le(std::ofstream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

}  // namespace

void write_observation(const std::filesystem::path& path,
                       const Observation& obs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot open " + path.string());
    const Eigen::Index n_ant = obs.y.empty() ? 0 : obs.y[0].rows();
    for (const auto& y : obs.y)
        for (unsigned k = 0; k < obs.n_symbols; ++k)
            for (Eigen::Index a = 0; a < n_ant; ++a) {
                put_float_le(out, static_cast<float>(y(a, k).real()));
                put_float_le(out, static_cast<float>(y(a, k).imag()));
            }
    if (!out) throw std::runtime_error("io: write failed for " + path.string());

    json sidecar = {{"dtype", "complex64"},
                    {"endianness", "little"},
                    {"n_subcarriers", obs.y.size()},
                    {"n_symbols", obs.n_symbols},
                    {"n_antennas", n_ant},
                    {"order", "subcarrier,symbol,antenna"}};
    std::ofstream side(path.string() + ".json");
    side << sidecar.dump(2) << "\n";
    if (!side) throw std::runtime_error("io: sidecar write failed");
}

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open " + path.string());
    return json::parse(in);
}

}  // namespace qsap::io
