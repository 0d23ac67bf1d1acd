#include "clr/codec.hpp"

#include <cstring>

#include "clr/bitio.hpp"
#include "clr/intcode.hpp"
#include "clr/sphere.hpp"

namespace clr {

namespace {

constexpr char kMagic[4] = {'C', 'L', 'R', '1'};

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& b, double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    put_u64(b, u);
}

struct ByteReader {
    const std::vector<std::uint8_t>& b;
    std::size_t at = 0;

    void need(std::size_t n) const {
        if (at + n > b.size()) throw CodecError("truncated header");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[at + i];
        at += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[at + i];
        at += 8;
        return v;
    }
    double f64() {
        std::uint64_t u = u64();
        double d;
        std::memcpy(&d, &u, 8);
        return d;
    }
};

}  // namespace

std::size_t header_bytes(std::size_t k_active) { return 40 + 4 * k_active; }

std::vector<std::uint8_t> encode_model(const DesignMatrix& full, const CLRModel& model) {
    const std::size_t k = model.active_features.size();
    if (model.theta.size() != static_cast<Eigen::Index>(k) ||
        model.delta.size() != static_cast<Eigen::Index>(k)) {
        throw CodecError("model arrays disagree on the active feature count");
    }
    for (int idx : model.active_features) {
        if (idx < 0 || idx >= full.n_features()) throw CodecError("feature index out of range");
    }

    std::vector<std::uint8_t> out;
    out.reserve(header_bytes(k) + 64);
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, kCodecVersion);
    put_u64(out, static_cast<std::uint64_t>(full.n_obs()));
    put_u64(out, static_cast<std::uint64_t>(k));
    put_f64(out, full.delta_y);
    put_f64(out, full.offset);
    for (int idx : model.active_features) put_u32(out, static_cast<std::uint32_t>(idx));

    BitWriter w;
    Eigen::VectorXd sharp(model.theta.size());
    for (Eigen::Index i = 0; i < model.theta.size(); ++i) {
        RationalCode c = alpha_encode(model.theta[i], model.delta[i]);
        write_alpha(w, c);
        sharp[i] = c.value();
    }
    DesignMatrix act = full.take_rows(model.active_features);
    write_u_big(w, spiral_rank(quantized_residuals(act, sharp)));

    out.insert(out.end(), w.bytes().begin(), w.bytes().end());
    return out;
}

DecodedModel decode_model(const std::vector<std::uint8_t>& bytes, const Eigen::MatrixXd& X_full) {
    ByteReader r{bytes};
    r.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw CodecError("bad magic");
    r.at = 4;
    std::uint32_t version = r.u32();
    if (version != kCodecVersion) {
        throw CodecError("unsupported version " + std::to_string(version));
    }

    DecodedModel out;
    out.n_obs = r.u64();
    std::uint64_t k = r.u64();
    out.delta_y = r.f64();
    out.offset = r.f64();
    if (out.n_obs != static_cast<std::uint64_t>(X_full.cols())) {
        throw CodecError("design matrix has the wrong observation count");
    }
    if (!(out.delta_y > 0.0)) throw CodecError("non-positive target step");
    out.active_features.reserve(k);
    for (std::uint64_t i = 0; i < k; ++i) {
        std::uint32_t idx = r.u32();
        if (idx >= static_cast<std::uint64_t>(X_full.rows())) {
            throw CodecError("feature index out of range");
        }
        out.active_features.push_back(static_cast<int>(idx));
    }

    BitReader bits(bytes.data() + r.at, (bytes.size() - r.at) * 8);
    out.theta_sharp.resize(static_cast<Eigen::Index>(k));
    BigInt rank;
    try {
        for (std::uint64_t i = 0; i < k; ++i) {
            out.theta_sharp[static_cast<Eigen::Index>(i)] = alpha_decode(read_alpha(bits));
        }
        rank = read_u_big(bits);
    } catch (const std::out_of_range&) {
        throw CodecError("truncated payload");
    }

    const int n = static_cast<int>(out.n_obs);
    Eigen::MatrixXd act(out.active_features.size(), n);
    for (std::size_t i = 0; i < out.active_features.size(); ++i) {
        act.row(i) = X_full.row(out.active_features[i]);
    }
    Eigen::VectorXd pred = act.transpose() * out.theta_sharp;
    std::vector<std::int64_t> e = spiral_unrank(n, rank);
    out.target.resize(n);
    for (int j = 0; j < n; ++j) {
        std::int64_t m = grid_index(pred[j], out.offset, out.delta_y) + e[j];
        out.target[j] = out.offset + out.delta_y * static_cast<double>(m);
    }
    return out;
}

}  // namespace clr
