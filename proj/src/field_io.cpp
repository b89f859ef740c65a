#include "shjb/field_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace shjb {

namespace {

constexpr char magic[8] = {'S', 'H', 'J', 'B', 'F', 'L', 'D', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("field read: truncated header");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("field read: truncated payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void write_binary_header(std::ostream& os, const TorusGrid& grid, std::uint8_t tag) {
    os.write(magic, 8);
    put_u32(os, static_cast<std::uint32_t>(grid.dim));
    put_u32(os, static_cast<std::uint32_t>(grid.points_per_axis));
    os.put(static_cast<char>(tag));
}

void require_finite(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("field io: non-finite value");
}

void print_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

} // namespace

void write_binary(std::ostream& os, const SpatialField& f) {
    for (double v : f.values) require_finite(v);
    write_binary_header(os, f.grid, 0);
    for (double v : f.values) put_f64(os, v);
}

void write_binary(std::ostream& os, const SpectralField& f) {
    write_binary_header(os, f.grid, 1);
    for (const auto& c : f.coefficients) {
        require_finite(c.real());
        require_finite(c.imag());
        put_f64(os, c.real());
        put_f64(os, c.imag());
    }
}

AnyField read_binary(std::istream& is) {
    char head[8];
    is.read(head, 8);
    if (!is || std::memcmp(head, magic, 8) != 0)
        throw std::runtime_error("field read: bad magic");
    int dim = static_cast<int>(get_u32(is));
    int points = static_cast<int>(get_u32(is));
    int tag = is.get();
    if (tag != 0 && tag != 1) throw std::runtime_error("field read: bad representation tag");
    TorusGrid grid = make_grid(dim, points);
    const std::size_t total = grid.total_points();
    if (tag == 0) {
        SpatialField f{grid, std::vector<double>(total)};
        for (auto& v : f.values) {
            v = get_f64(is);
            require_finite(v);
        }
        return f;
    }
    SpectralField f{grid, std::vector<std::complex<double>>(total)};
    for (auto& c : f.coefficients) {
        double re = get_f64(is);
        double im = get_f64(is);
        require_finite(re);
        require_finite(im);
        c = {re, im};
    }
    return f;
}

void write_text(std::ostream& os, const SpatialField& f) {
    os << "# shjb-field dim=" << f.grid.dim << " points=" << f.grid.points_per_axis
       << " repr=physical\n";
    for (double v : f.values) {
        require_finite(v);
        print_value(os, v);
        os << '\n';
    }
}

void write_text(std::ostream& os, const SpectralField& f) {
    os << "# shjb-field dim=" << f.grid.dim << " points=" << f.grid.points_per_axis
       << " repr=spectral\n";
    for (const auto& c : f.coefficients) {
        require_finite(c.real());
        require_finite(c.imag());
        print_value(os, c.real());
        os << ' ';
        print_value(os, c.imag());
        os << '\n';
    }
}

AnyField read_text(std::istream& is) {
    // extra leading comment lines (config hash and the like) are skipped;
    // the shjb-field line is the header proper
    std::string header;
    int dim = 0, points = 0;
    char repr[16] = {0};
    for (;;) {
        if (!std::getline(is, header)) throw std::runtime_error("field read: no header");
        if (std::sscanf(header.c_str(), "# shjb-field dim=%d points=%d repr=%15s", &dim,
                        &points, repr) == 3)
            break;
        if (header.empty() || header[0] != '#')
            throw std::runtime_error("field read: bad text header");
    }
    TorusGrid grid = make_grid(dim, points);
    const std::size_t total = grid.total_points();
    std::string line;
    if (std::strcmp(repr, "physical") == 0) {
        SpatialField f{grid, std::vector<double>(total)};
        for (auto& v : f.values) {
            if (!std::getline(is, line)) throw std::runtime_error("field read: truncated text");
            v = std::strtod(line.c_str(), nullptr);
            require_finite(v);
        }
        return f;
    }
    if (std::strcmp(repr, "spectral") != 0)
        throw std::runtime_error("field read: bad repr in text header");
    SpectralField f{grid, std::vector<std::complex<double>>(total)};
    for (auto& c : f.coefficients) {
        if (!std::getline(is, line)) throw std::runtime_error("field read: truncated text");
        char* end = nullptr;
        double re = std::strtod(line.c_str(), &end);
        double im = std::strtod(end, nullptr);
        require_finite(re);
        require_finite(im);
        c = {re, im};
    }
    return f;
}

void save_field(const std::string& path, const AnyField& f, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    std::visit([&](const auto& field) { binary ? write_binary(os, field) : write_text(os, field); },
               f);
}

AnyField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char head = static_cast<char>(is.peek());
    return head == '#' ? read_text(is) : read_binary(is);
}

} // namespace shjb
