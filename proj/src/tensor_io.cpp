#include "secam/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <regex>

#include "secam/errors.hpp"

namespace secam {

static_assert(std::endian::native == std::endian::little, "NPY I/O assumes a little-endian host");

namespace {

constexpr std::string_view kMagic = "\x93NUMPY";
constexpr std::size_t kPreludeSize = 10;  // magic + version + u16 header length
constexpr std::size_t kAlignment = 64;

std::string_view descr_of(DType dtype) {
    switch (dtype) {
        case DType::Float32: return "<f4";
        case DType::Float64: return "<f8";
        case DType::UInt8: return "|u1";
    }
    return "";
}

std::string shape_tuple(const Tensor::Shape& shape) {
    std::string out = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(shape[i]);
    }
    if (shape.size() == 1) out += ",";
    return out + ")";
}

struct Header {
    std::string descr;
    bool fortran_order = false;
    Tensor::Shape shape;
};

Header parse_header(std::string_view text) {
    static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
    static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
    static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");

    const std::string header(text);
    std::smatch m;
    Header h;
    if (!std::regex_search(header, m, descr_re)) throw FormatError("npy header lacks 'descr'");
    h.descr = m[1];
    if (!std::regex_search(header, m, order_re))
        throw FormatError("npy header lacks 'fortran_order'");
    h.fortran_order = m[1] == "True";
    if (!std::regex_search(header, m, shape_re)) throw FormatError("npy header lacks 'shape'");

    const std::string dims = m[1];
    static const std::regex dim_re(R"(\s*(\d+)\s*(,|$))");
    std::size_t consumed = 0;
    for (auto it = std::sregex_iterator(dims.begin(), dims.end(), dim_re);
         it != std::sregex_iterator(); ++it) {
        if (static_cast<std::size_t>(it->position()) != consumed)
            throw FormatError("malformed npy shape '" + dims + "'");
        h.shape.push_back(std::stoull((*it)[1]));
        consumed += it->length();
    }
    if (dims.find_first_not_of(" \t") != std::string::npos && consumed != dims.size())
        throw FormatError("malformed npy shape '" + dims + "'");
    return h;
}

template <typename T>
std::vector<T> copy_payload(std::span<const std::byte> payload, std::size_t count) {
    std::vector<T> out(count);
    std::memcpy(out.data(), payload.data(), count * sizeof(T));
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view preamble,
                std::span<const std::byte> payload) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(preamble.data(), static_cast<std::streamsize>(preamble.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string npy_preamble(std::string_view descr, const Tensor::Shape& shape) {
    std::string dict = "{'descr': '" + std::string(descr) +
                       "', 'fortran_order': False, 'shape': " + shape_tuple(shape) + ", }";
    // Pad with spaces so the payload starts on an aligned offset; the
    // trailing newline is part of the header.
    const std::size_t unpadded = kPreludeSize + dict.size() + 1;
    const std::size_t total = (unpadded + kAlignment - 1) / kAlignment * kAlignment;
    dict.append(total - unpadded, ' ');
    dict.push_back('\n');

    std::string out(kMagic);
    out.push_back('\x01');
    out.push_back('\x00');
    const auto len = static_cast<std::uint16_t>(dict.size());
    out.push_back(static_cast<char>(len & 0xff));
    out.push_back(static_cast<char>(len >> 8));
    return out + dict;
}

Tensor parse_npy(std::span<const std::byte> file) {
    if (file.size() < kPreludeSize ||
        std::memcmp(file.data(), kMagic.data(), kMagic.size()) != 0) {
        throw FormatError("missing NPY magic");
    }
    const auto major = static_cast<unsigned>(file[6]);
    const auto minor = static_cast<unsigned>(file[7]);
    if (major != 1 || minor != 0) {
        throw UnsupportedError("NPY version " + std::to_string(major) + "." +
                               std::to_string(minor) + " (only 1.0 is supported)");
    }
    const std::size_t header_len =
        static_cast<std::size_t>(file[8]) | (static_cast<std::size_t>(file[9]) << 8);
    if (file.size() < kPreludeSize + header_len) throw FormatError("truncated NPY header");

    const Header h = parse_header(
        {reinterpret_cast<const char*>(file.data()) + kPreludeSize, header_len});
    if (h.fortran_order) throw UnsupportedError("Fortran-ordered arrays are not supported");

    const auto payload = file.subspan(kPreludeSize + header_len);
    const auto count = std::accumulate(h.shape.begin(), h.shape.end(), std::size_t{1},
                                       std::multiplies<>());
    auto check_size = [&](std::size_t elem) {
        if (payload.size() < count * elem)
            throw FormatError("truncated NPY payload: need " + std::to_string(count * elem) +
                              " bytes, have " + std::to_string(payload.size()));
    };

    if (h.descr == "<f4") {
        check_size(4);
        return Tensor(h.shape, copy_payload<float>(payload, count));
    }
    if (h.descr == "<f8") {
        check_size(8);
        return Tensor(h.shape, copy_payload<double>(payload, count));
    }
    if (h.descr == "|u1" || h.descr == "<u1") {
        check_size(1);
        return Tensor(h.shape, copy_payload<std::uint8_t>(payload, count));
    }
    throw UnsupportedError("unsupported NPY dtype '" + h.descr + "'");
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_npy(std::as_bytes(std::span(buf)));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    } catch (const UnsupportedError& e) {
        throw UnsupportedError(path.string() + ": " + e.what());
    } catch (const ShapeError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string encode_npy(const Tensor& tensor) {
    std::string out = npy_preamble(descr_of(tensor.dtype()), tensor.shape());
    const auto payload = tensor.bytes();
    out.append(reinterpret_cast<const char*>(payload.data()), payload.size());
    return out;
}

void write_tensor(const Tensor& tensor, const std::filesystem::path& path) {
    write_file(path, npy_preamble(descr_of(tensor.dtype()), tensor.shape()), tensor.bytes());
}

void write_int32_npy(std::span<const std::int32_t> values, const Tensor::Shape& shape,
                     const std::filesystem::path& path) {
    const auto count =
        std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    if (shape.empty() || count != values.size())
        throw ShapeError("int32 array of " + std::to_string(values.size()) +
                         " values does not fit shape " + shape_to_string(shape));
    write_file(path, npy_preamble("<i4", shape), std::as_bytes(values));
}

}  // namespace secam
