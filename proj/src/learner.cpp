#include "seqdac/learner.hpp"

#include <cstring>
#include <numeric>

#include "seqdac/baselines.hpp"
#include "seqdac/sadn.hpp"

namespace seqdac {

SeqWiring::SeqWiring(int state_dim, std::vector<int> action_sizes,
                     std::vector<int> order)
    : state_dim_(state_dim),
      action_sizes_(std::move(action_sizes)),
      order_(std::move(order)) {
    if (state_dim_ <= 0) throw std::invalid_argument("SeqWiring: state_dim <= 0");
    int n = static_cast<int>(action_sizes_.size());
    if (n == 0) throw std::invalid_argument("SeqWiring: no agents");
    if (order_.empty()) order_ = identity_order(n);
    if (static_cast<int>(order_.size()) != n)
        throw std::invalid_argument("SeqWiring: order size mismatch");
    std::vector<bool> seen(n, false);
    for (int a : order_) {
        if (a < 0 || a >= n || seen[a])
            throw std::invalid_argument("SeqWiring: order is not a permutation");
        seen[a] = true;
    }
    for (int s : action_sizes_)
        if (s <= 0) throw std::invalid_argument("SeqWiring: action size <= 0");
    input_dims_.resize(n);
    int dim = state_dim_;
    for (int pos = 0; pos < n; ++pos) {
        input_dims_[pos] = dim;
        dim += action_sizes_[order_[pos]];
    }
}

void SeqWiring::assemble(int pos, const double* state, const int* joint_action,
                         std::vector<double>& dst) const {
    dst.assign(input_dims_[pos], 0.0);
    std::memcpy(dst.data(), state, sizeof(double) * state_dim_);
    int offset = state_dim_;
    for (int k = 0; k < pos; ++k) {
        int agent = order_[k];
        dst[offset + joint_action[agent]] = 1.0;
        offset += action_sizes_[agent];
    }
}

std::vector<int> identity_order(int n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

std::vector<int> reverse_order(int n) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = n - 1 - i;
    return order;
}

// -- checkpoint container -----------------------------------------------------

namespace detail {

namespace {

constexpr uint8_t kMagic[4] = {'S', 'Q', 'C', '1'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t fnv1a(std::span<const uint8_t> bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct Reader {
    std::span<const uint8_t> bytes;
    size_t pos = 0;
    void need(size_t n) const {
        if (pos + n > bytes.size()) throw DecodeError("truncated checkpoint");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
};

} // namespace

std::vector<uint8_t> pack_learner_checkpoint(const std::string& kind, int state_dim,
                                             const std::vector<int>& action_sizes,
                                             const std::vector<int>& order,
                                             const std::vector<const Mlp*>& nets) {
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, 1); // version
    put_u32(out, static_cast<uint32_t>(kind.size()));
    out.insert(out.end(), kind.begin(), kind.end());
    put_u32(out, static_cast<uint32_t>(state_dim));
    put_u32(out, static_cast<uint32_t>(action_sizes.size()));
    for (int s : action_sizes) put_u32(out, static_cast<uint32_t>(s));
    for (int o : order) put_u32(out, static_cast<uint32_t>(o));
    put_u32(out, static_cast<uint32_t>(nets.size()));
    for (const Mlp* net : nets) {
        std::vector<uint8_t> blob = serialize(*net);
        put_u64(out, blob.size());
        out.insert(out.end(), blob.begin(), blob.end());
    }
    put_u64(out, fnv1a(out));
    return out;
}

UnpackedCheckpoint unpack_learner_checkpoint(std::span<const uint8_t> bytes) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DecodeError("bad learner checkpoint magic");
    uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
        stored |= static_cast<uint64_t>(bytes[bytes.size() - 8 + i]) << (8 * i);
    if (fnv1a(bytes.subspan(0, bytes.size() - 8)) != stored)
        throw DecodeError("learner checkpoint checksum mismatch");

    Reader r{bytes.subspan(4, bytes.size() - 12)};
    if (r.u32() != 1) throw DecodeError("unsupported learner checkpoint version");
    UnpackedCheckpoint u;
    uint32_t kind_len = r.u32();
    r.need(kind_len);
    u.kind.assign(reinterpret_cast<const char*>(r.bytes.data() + r.pos), kind_len);
    r.pos += kind_len;
    u.state_dim = static_cast<int>(r.u32());
    uint32_t n = r.u32();
    if (n == 0 || n > 1024) throw DecodeError("bad agent count");
    for (uint32_t i = 0; i < n; ++i) u.action_sizes.push_back(static_cast<int>(r.u32()));
    for (uint32_t i = 0; i < n; ++i) u.order.push_back(static_cast<int>(r.u32()));
    uint32_t net_count = r.u32();
    for (uint32_t i = 0; i < net_count; ++i) {
        uint64_t len = r.u64();
        r.need(len);
        u.nets.push_back(deserialize(r.bytes.subspan(r.pos, len)));
        r.pos += len;
    }
    if (r.pos != r.bytes.size()) throw DecodeError("trailing bytes in checkpoint");
    return u;
}

} // namespace detail

std::unique_ptr<Learner> load_learner_checkpoint(std::span<const uint8_t> bytes,
                                                 const LearnerConfig& cfg) {
    detail::UnpackedCheckpoint u = detail::unpack_learner_checkpoint(bytes);
    if (u.kind == "sadn") return SadnLearner::from_checkpoint(u, cfg);
    if (u.kind == "vdn") return VdnLearner::from_checkpoint(u, cfg);
    if (u.kind == "saql") return SaqlLearner::from_checkpoint(u, cfg);
    if (u.kind == "ace") return AceLearner::from_checkpoint(u, cfg);
    throw DecodeError("unknown learner kind: " + u.kind);
}

} // namespace seqdac
