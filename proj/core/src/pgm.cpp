#include <fractex/pgm.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace fractex {

namespace {

// Token reader for the PGM header: skips whitespace and '#' comments.
class HeaderReader {
public:
    explicit HeaderReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    size_t pos() const { return pos_; }

    bool next_token(std::string& out) {
        out.clear();
        while (pos_ < bytes_.size()) {
            const char c = static_cast<char>(bytes_[pos_]);
            if (c == '#') {
                while (pos_ < bytes_.size() && static_cast<char>(bytes_[pos_]) != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
                ++pos_;
            } else {
                break;
            }
        }
        while (pos_ < bytes_.size()) {
            const char c = static_cast<char>(bytes_[pos_]);
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f' ||
                c == '#') {
                break;
            }
            out.push_back(c);
            ++pos_;
        }
        return !out.empty();
    }

    // Consumes the single whitespace byte that separates the header from
    // the payload.
    bool consume_separator() {
        if (pos_ >= bytes_.size()) return false;
        const char c = static_cast<char>(bytes_[pos_]);
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos_;
            return true;
        }
        return false;
    }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

long parse_header_int(const std::string& token, const char* field) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
        throw IoError(std::string("load_pgm: malformed ") + field + " field '" + token + "'");
    }
    errno = 0;
    const long v = std::strtol(token.c_str(), nullptr, 10);
    if (errno != 0) {
        throw IoError(std::string("load_pgm: ") + field + " out of range");
    }
    return v;
}

} // namespace

GrayImage load_pgm(std::span<const uint8_t> bytes) {
    HeaderReader reader(bytes);
    std::string token;
    if (!reader.next_token(token) || token != "P5") {
        throw IoError("load_pgm: not a binary PGM (expected magic 'P5')");
    }
    if (!reader.next_token(token)) throw IoError("load_pgm: missing width");
    const long width = parse_header_int(token, "width");
    if (!reader.next_token(token)) throw IoError("load_pgm: missing height");
    const long height = parse_header_int(token, "height");
    if (!reader.next_token(token)) throw IoError("load_pgm: missing maxval");
    const long maxval = parse_header_int(token, "maxval");

    if (width < 1 || height < 1) {
        throw IoError("load_pgm: non-positive dimensions in header");
    }
    if (maxval == 0) throw IoError("load_pgm: maxval is zero");
    if (maxval > 65535) throw IoError("load_pgm: maxval " + std::to_string(maxval) + " > 65535");
    if (!reader.consume_separator()) {
        throw IoError("load_pgm: missing whitespace after maxval");
    }

    const size_t n = static_cast<size_t>(width) * static_cast<size_t>(height);
    const size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    const size_t need = n * bytes_per_sample;
    const size_t have = bytes.size() - reader.pos();
    if (have != need) {
        throw IoError("load_pgm: payload size mismatch: header " + std::to_string(width) + "x" +
                      std::to_string(height) + " needs " + std::to_string(need) + " bytes, got " +
                      std::to_string(have));
    }

    std::vector<double> data(n);
    const uint8_t* p = bytes.data() + reader.pos();
    const double inv = 1.0 / static_cast<double>(maxval);
    if (bytes_per_sample == 1) {
        for (size_t i = 0; i < n; ++i) {
            data[i] = static_cast<double>(p[i]) * inv;
        }
    } else {
        for (size_t i = 0; i < n; ++i) {
            const unsigned v = (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
            data[i] = static_cast<double>(v) * inv;
        }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

std::vector<uint8_t> write_pgm(const GrayImage& img, int maxval) {
    validate_image(img, "write_pgm");
    if (maxval < 1 || maxval > 65535) {
        throw PreconditionError("write_pgm: maxval must be in [1, 65535]");
    }
    char header[64];
    const int header_len =
        std::snprintf(header, sizeof header, "P5\n%d %d\n%d\n", img.width(), img.height(), maxval);

    const size_t n = img.size();
    const size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    std::vector<uint8_t> out;
    out.reserve(static_cast<size_t>(header_len) + n * bytes_per_sample);
    out.insert(out.end(), header, header + header_len);

    const auto px = img.pixels();
    for (size_t i = 0; i < n; ++i) {
        double v = px[i];
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        const unsigned q = static_cast<unsigned>(std::lround(v * maxval));
        if (bytes_per_sample == 1) {
            out.push_back(static_cast<uint8_t>(q));
        } else {
            out.push_back(static_cast<uint8_t>(q >> 8));
            out.push_back(static_cast<uint8_t>(q & 0xFF));
        }
    }
    return out;
}

GrayImage load_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
    try {
        return load_pgm(bytes);
    } catch (const IoError& e) {
        throw IoError(std::string(e.what()) + " (file '" + path.string() + "')");
    }
}

void write_pgm_file(const GrayImage& img, const std::filesystem::path& path, int maxval) {
    const std::vector<uint8_t> bytes = write_pgm(img, maxval);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

} // namespace fractex
