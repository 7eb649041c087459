#ifndef URV_IO_HPP
#define URV_IO_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagnostics.hpp"
#include "test_matrices.hpp"

namespace urv {

//
// Matrix files.
//   CSV:    one matrix row per line, comma separated, %.17g.
//   binary: "URVK1", rows and cols as little-endian u64, then the entries in
//           column-major order as little-endian IEEE-754 doubles.
//
inline constexpr std::array<char, 5> binary_magic{'U', 'R', 'V', 'K', '1'};

inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_matrix_csv(std::ostream& os, ConstMatrixView a)
{
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            if (j) {
                os << ',';
            }
            os << format_double(a(i, j));
        }
        os << '\n';
    }
}

inline Matrix read_matrix_csv(std::istream& is)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            // strtod rather than stod: subnormals set ERANGE but are valid
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            const auto used = static_cast<std::size_t>(end - cell.c_str());
            if (used == 0 || cell.find_first_not_of(" \t", used) != std::string::npos || std::isinf(v)) {
                throw invalid_input("matrix csv: bad number '" + cell + "'");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw invalid_input("matrix csv: ragged rows");
        }
        rows.push_back(std::move(row));
    }
    detail::require(!rows.empty(), "matrix csv: empty input");
    Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return a;
}

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v)
{
    char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    os.write(b, 8);
}

inline std::uint64_t get_u64(std::istream& is)
{
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) {
        throw invalid_input("matrix binary: truncated file");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    }
    return v;
}

} // namespace detail

inline void write_matrix_binary(std::ostream& os, ConstMatrixView a)
{
    os.write(binary_magic.data(), binary_magic.size());
    detail::put_u64(os, static_cast<std::uint64_t>(a.rows()));
    detail::put_u64(os, static_cast<std::uint64_t>(a.cols()));
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            std::uint64_t bits;
            const double v = a(i, j);
            std::memcpy(&bits, &v, sizeof bits);
            detail::put_u64(os, bits);
        }
    }
}

inline Matrix read_matrix_binary(std::istream& is)
{
    std::array<char, 5> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != binary_magic) {
        throw invalid_input("matrix binary: bad magic");
    }
    const auto rows = detail::get_u64(is);
    const auto cols = detail::get_u64(is);
    detail::require(rows < (1ULL << 31) && cols < (1ULL << 31), "matrix binary: implausible dimensions");
    Matrix a(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index e = 0; e < a.size(); ++e) {
        const std::uint64_t bits = detail::get_u64(is);
        std::memcpy(a.data() + e, &bits, sizeof bits);
    }
    return a;
}

inline void save_matrix(const std::string& path, ConstMatrixView a)
{
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    std::ofstream os(path, std::ios::binary);
    detail::require(static_cast<bool>(os), "cannot open '" + path + "' for writing");
    if (csv) {
        write_matrix_csv(os, a);
    } else {
        write_matrix_binary(os, a);
    }
}

// Binary when the file starts with the magic, CSV otherwise.
inline Matrix load_matrix(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    detail::require(static_cast<bool>(is), "cannot open '" + path + "'");
    std::array<char, 5> head{};
    is.read(head.data(), head.size());
    const bool binary = is.gcount() == 5 && head == binary_magic;
    is.clear();
    is.seekg(0);
    return binary ? read_matrix_binary(is) : read_matrix_csv(is);
}

//
// Profile CSV: header `k,abs_sp,abs_fro,rel_sp,rel_fro,sigma_ref,smin_r11,smax_r22`,
// one row per k. Columns without a value for the algorithm hold "nan".
//
inline constexpr const char* profile_csv_header = "k,abs_sp,abs_fro,rel_sp,rel_fro,sigma_ref,smin_r11,smax_r22";

inline void write_profile_csv(std::ostream& os, const ErrorProfile& e, const RevealProfile* r = nullptr)
{
    os << profile_csv_header << '\n';
    for (std::size_t i = 0; i < e.k.size(); ++i) {
        os << e.k[i] << ',' << format_double(e.abs_spectral[i]) << ',' << format_double(e.abs_frobenius[i]) << ','
           << format_double(e.rel_spectral[i]) << ',' << format_double(e.rel_frobenius[i]) << ','
           << format_double(e.sigma_ref[i]) << ',' << format_double(r ? r->smin_r11[i] : not_applicable) << ','
           << format_double(r ? r->smax_r22[i] : not_applicable) << '\n';
    }
}

// JSON forms for experiment manifests.

inline void to_json(nlohmann::json& j, const RngSeed& s) { j = {{"seed", s.seed}, {"stream", s.stream}}; }

inline void from_json(const nlohmann::json& j, RngSeed& s)
{
    s.seed = j.at("seed").get<std::uint64_t>();
    s.stream = j.value("stream", std::uint64_t{0});
}

inline void to_json(nlohmann::json& j, const TestMatrixSpec& s)
{
    j = {{"kind", std::string(to_string(s.kind))}, {"m", s.m}, {"n", s.n}, {"seed", s.seed}, {"params", nlohmann::json::object()}};
    if (s.kind == MatrixKind::kahan) {
        j["params"]["theta"] = s.theta;
    }
    if (s.kind == MatrixKind::fast_decay) {
        j["params"]["literal_decay"] = s.literal_decay;
    }
}

inline void from_json(const nlohmann::json& j, TestMatrixSpec& s)
{
    s = TestMatrixSpec::defaults(parse_matrix_kind(j.at("kind").get<std::string>()));
    s.m = j.value("m", s.m);
    s.n = j.value("n", s.n);
    if (j.contains("seed")) {
        s.seed = j.at("seed").get<RngSeed>();
    }
    if (j.contains("params")) {
        const auto& p = j.at("params");
        s.theta = p.value("theta", s.theta);
        s.literal_decay = p.value("literal_decay", s.literal_decay);
    }
}

} // namespace urv

#endif // URV_IO_HPP
