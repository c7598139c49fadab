#include "emrtm/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace emrtm {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

void put_f64(std::string& out, double v)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
    }
}

double get_f64(const std::string& in, std::size_t offset)
{
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= std::uint64_t(static_cast<unsigned char>(in[offset + i])) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

ordered_json point_json(const Eigen::Vector2d& p)
{
    return ordered_json::array({p.x(), p.y()});
}

Eigen::Vector2d json_point(const ordered_json& j)
{
    return Eigen::Vector2d(j.at(0).get<double>(), j.at(1).get<double>());
}

ordered_json read_sidecar(const fs::path& bin, const char* format)
{
    ordered_json side;
    try {
        side = ordered_json::parse(read_text(sidecar_path(bin)));
    } catch (const ordered_json::exception& e) {
        throw IoError("malformed sidecar for '" + bin.string() + "': " + e.what());
    }
    if (side.value("format", "") != format) {
        throw IoError("'" + sidecar_path(bin).string() + "' is not a " + format + " sidecar");
    }
    return side;
}

std::string checked_payload(const fs::path& bin, const ordered_json& side, std::size_t doubles)
{
    const std::string payload = read_text(bin);
    if (payload.size() != doubles * 8) {
        throw IoError("'" + bin.string() + "' has " + std::to_string(payload.size()) + " bytes, expected "
                      + std::to_string(doubles * 8));
    }
    if (side.contains("sha256") && side["sha256"].get<std::string>() != sha256_hex(payload)) {
        throw IoError("checksum mismatch for '" + bin.string() + "'");
    }
    return payload;
}

} // namespace

std::string sha256_hex(std::string_view bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256_hex: digest failed");
    }
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) {
        os << std::setw(2) << static_cast<int>(md[i]);
    }
    return os.str();
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed on '" + path.string() + "'");
    }
    return os.str();
}

void write_atomic(const fs::path& path, std::string_view bytes)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            throw IoError("write failed on '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
    }
}

fs::path sidecar_path(const fs::path& bin)
{
    fs::path out = bin;
    out.replace_extension(".json");
    return out;
}

std::string write_dataset(const ScatterDataSet& data, const fs::path& bin)
{
    std::string payload;
    payload.reserve(data.values.size() * 32);
    for (const CVector2& v : data.values) {
        for (int c = 0; c < 2; ++c) {
            put_f64(payload, v(c).real());
            put_f64(payload, v(c).imag());
        }
    }
    const std::string digest = sha256_hex(payload);

    ordered_json side;
    side["format"] = "emrtm-dataset";
    side["version"] = kFormatVersion;
    side["layout"] = "float64 little-endian (re, im), row-major (source, receiver, polarization, component)";
    side["shape"] = {data.sources(), data.receivers(), data.polarization_count(), 2};
    side["aperture"] = {{"sources", data.aperture.source_count()},
                        {"source_radius", data.aperture.source_radius()},
                        {"receivers", data.aperture.receiver_count()},
                        {"receiver_radius", data.aperture.receiver_radius()}};
    side["wave"] = {{"k", data.wave.k()}, {"lambda", data.wave.lambda()}};
    ordered_json pols = ordered_json::array();
    for (const auto& p : data.polarizations) {
        pols.push_back(point_json(p));
    }
    side["polarizations"] = pols;
    side["scene_digest"] = data.scene_digest;
    side["solver"] = data.solver;
    side["noise"] = {{"applied", data.noise.applied}, {"level", data.noise.level},
                     {"seed", data.noise.seed}, {"sigma", data.noise.sigma},
                     {"model", "mu * sigma * N(0,1) on re and im of each component"}};
    side["sha256"] = digest;

    write_atomic(bin, payload);
    write_atomic(sidecar_path(bin), side.dump(2) + "\n");
    return digest;
}

ScatterDataSet read_dataset(const fs::path& bin)
{
    const ordered_json side = read_sidecar(bin, "emrtm-dataset");
    try {
        const auto& ap = side.at("aperture");
        Aperture aperture(ap.at("sources").get<int>(), ap.at("source_radius").get<double>(),
                          ap.at("receivers").get<int>(), ap.at("receiver_radius").get<double>());
        std::vector<Eigen::Vector2d> pols;
        for (const auto& p : side.at("polarizations")) {
            pols.push_back(json_point(p));
        }
        ScatterDataSet data(aperture, WaveConfig::from_wavenumber(side.at("wave").at("k").get<double>()), pols);
        data.scene_digest = side.at("scene_digest").get<std::string>();
        data.solver = side.at("solver").get<std::string>();
        const auto& nz = side.at("noise");
        data.noise = NoiseRecord{nz.at("applied").get<bool>(), nz.at("level").get<double>(),
                                 nz.at("seed").get<std::uint64_t>(), nz.at("sigma").get<double>()};
        const std::string payload = checked_payload(bin, side, data.values.size() * 4);
        std::size_t off = 0;
        for (CVector2& v : data.values) {
            for (int c = 0; c < 2; ++c) {
                v(c) = cplx(get_f64(payload, off), get_f64(payload, off + 8));
                off += 16;
            }
        }
        return data;
    } catch (const ordered_json::exception& e) {
        throw IoError("malformed dataset sidecar for '" + bin.string() + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError("invalid dataset sidecar for '" + bin.string() + "': " + e.what());
    }
}

std::string write_image(const ImageGrid& img, const fs::path& bin)
{
    std::string payload;
    payload.reserve(img.values.size() * 8);
    for (Eigen::Index i = 0; i < img.values.size(); ++i) {
        put_f64(payload, img.values(i));
    }
    const std::string digest = sha256_hex(payload);

    ordered_json side;
    side["format"] = "emrtm-image";
    side["version"] = kFormatVersion;
    side["layout"] = "float64 little-endian, row-major with x1 fastest: value[j * nx + i]";
    side["grid"] = {{"min", point_json(img.grid.lo())}, {"max", point_json(img.grid.hi())},
                    {"nodes", {img.grid.nx(), img.grid.ny()}}, {"registration", "vertex"}};
    ordered_json pols = ordered_json::array();
    for (const auto& p : img.provenance.polarizations) {
        pols.push_back(point_json(p));
    }
    side["provenance"] = {{"wavenumbers", img.provenance.wavenumbers},
                          {"polarizations", pols},
                          {"dataset_digests", img.provenance.dataset_digests},
                          {"kernel", img.provenance.variant},
                          {"weights", img.provenance.weights}};
    side["range"] = {img.values.size() ? img.values.minCoeff() : 0.0, img.values.size() ? img.values.maxCoeff() : 0.0};
    side["sha256"] = digest;

    write_atomic(bin, payload);
    write_atomic(sidecar_path(bin), side.dump(2) + "\n");
    return digest;
}

ImageGrid read_image(const fs::path& bin)
{
    const ordered_json side = read_sidecar(bin, "emrtm-image");
    try {
        const auto& g = side.at("grid");
        SamplingGrid grid(json_point(g.at("min")), json_point(g.at("max")), g.at("nodes").at(0).get<int>(),
                          g.at("nodes").at(1).get<int>());
        ImageGrid img(grid);
        const auto& prov = side.at("provenance");
        img.provenance.wavenumbers = prov.at("wavenumbers").get<std::vector<double>>();
        for (const auto& p : prov.at("polarizations")) {
            img.provenance.polarizations.push_back(json_point(p));
        }
        img.provenance.dataset_digests = prov.at("dataset_digests").get<std::vector<std::string>>();
        img.provenance.variant = prov.at("kernel").get<std::string>();
        img.provenance.weights = prov.at("weights").get<std::string>();
        const std::string payload = checked_payload(bin, side, std::size_t(grid.size()));
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            img.values(i) = get_f64(payload, std::size_t(i) * 8);
        }
        return img;
    } catch (const ordered_json::exception& e) {
        throw IoError("malformed image sidecar for '" + bin.string() + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError("invalid image sidecar for '" + bin.string() + "': " + e.what());
    }
}

std::string write_profile_csv(const Profile& profile, const fs::path& csv)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << (profile.axis == Axis::X1 ? "x1" : "x2") << ",value\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        os << profile.coordinate[i] << "," << profile.values[i] << "\n";
    }
    const std::string text = os.str();
    write_atomic(csv, text);
    return sha256_hex(text);
}

} // namespace emrtm
