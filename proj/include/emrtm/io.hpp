#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "emrtm/dataset.hpp"
#include "emrtm/imaging.hpp"

namespace emrtm {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view bytes);

std::string read_text(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Sidecar path of a binary artifact: foo.bin -> foo.json.
std::filesystem::path sidecar_path(const std::filesystem::path& bin);

/// Little-endian float64 pairs (re, im) in (source, receiver, polarization,
/// component) order, plus a JSON sidecar. Returns the SHA-256 of the binary.
std::string write_dataset(const ScatterDataSet& data, const std::filesystem::path& bin);
ScatterDataSet read_dataset(const std::filesystem::path& bin);

/// Little-endian float64 values, x1 fastest, plus a JSON sidecar.
std::string write_image(const ImageGrid& img, const std::filesystem::path& bin);
ImageGrid read_image(const std::filesystem::path& bin);

/// Two-column CSV: coordinate along the axis, image value.
std::string write_profile_csv(const Profile& profile, const std::filesystem::path& csv);

} // namespace emrtm
