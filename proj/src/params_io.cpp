#include "nlns/params_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nlns {

namespace {

constexpr char kPolicyMagic[8] = {'N', 'L', 'N', 'S', 'O', 'P', '0', '1'};
constexpr char kCkptMagic[8] = {'N', 'L', 'N', 'S', 'C', 'K', '0', '1'};

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    }

    void u32(uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(b, 4);
    }

    void u64(uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(b, 8);
    }

    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }

    void raw(const char* data, size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }

    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        raw(s.data(), s.size());
    }

    void vec(const std::string& name, const Vec& v) {
        str(name);
        u64(v.size());
        for (double x : v) f64(x);
    }

    void close(const std::string& path) {
        out_.flush();
        if (!out_) throw std::runtime_error("write failed: " + path);
    }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw std::runtime_error("cannot open " + path);
    }

    uint32_t u32() {
        char b[4];
        read(b, 4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }

    uint64_t u64() {
        char b[8];
        read(b, 8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }

    double f64() {
        uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    std::string str() {
        uint32_t n = u32();
        if (n > (1u << 24)) throw std::runtime_error(path_ + ": corrupt string length");
        std::string s(n, '\0');
        read(s.data(), n);
        return s;
    }

    void expect_magic(const char magic[8], const char* what) {
        char b[8];
        read(b, 8);
        if (std::memcmp(b, magic, 8) != 0)
            throw std::runtime_error(path_ + ": not a " + what + " file (bad magic/version)");
    }

    // name -> values; sizes validated by the caller against the live shapes
    void vec_into(const std::string& expected_name, Vec& dst) {
        std::string name = str();
        if (name != expected_name)
            throw std::runtime_error(path_ + ": expected tensor " + expected_name + ", found " + name);
        uint64_t n = u64();
        if (n != dst.size())
            throw std::runtime_error(path_ + ": tensor " + name + " has " + std::to_string(n) +
                                     " values, expected " + std::to_string(dst.size()));
        for (auto& x : dst) x = f64();
    }

    Vec free_vec() {
        uint64_t n = u64();
        if (n > (1ull << 32)) throw std::runtime_error(path_ + ": corrupt tensor length");
        Vec v(n);
        for (auto& x : v) x = f64();
        return v;
    }

private:
    void read(char* dst, size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (in_.gcount() != static_cast<std::streamsize>(n))
            throw std::runtime_error(path_ + ": truncated file");
    }

    std::ifstream in_;
    std::string path_;
};

void write_policy_body(Writer& w, const PolicyParameters& p, const std::string& meta_json) {
    w.u32(static_cast<uint32_t>(p.hidden));
    w.str(meta_json);
    auto views = param_views(const_cast<PolicyParameters&>(p));
    w.u32(static_cast<uint32_t>(views.size()));
    for (const auto& v : views) w.vec(v.name, *v.data);
}

PolicyParameters read_policy_body(Reader& r, std::string* meta_json) {
    uint32_t hidden = r.u32();
    if (hidden == 0 || hidden > 65536) throw std::runtime_error("implausible hidden width in file");
    std::string meta = r.str();
    PolicyParameters shape;
    shape.hidden = static_cast<int>(hidden);  // zeros_like sizes tensors from this
    PolicyParameters p = zeros_like(shape);
    auto views = param_views(p);
    uint32_t count = r.u32();
    if (count != views.size()) throw std::runtime_error("unexpected tensor count in policy file");
    for (auto& v : views) r.vec_into(v.name, *v.data);
    if (meta_json) *meta_json = std::move(meta);
    return p;
}

void write_adam(Writer& w, const AdamState& s) {
    w.f64(s.beta1);
    w.f64(s.beta2);
    w.f64(s.eps);
    w.u64(static_cast<uint64_t>(s.step));
    w.u64(s.m.size());
    for (double x : s.m) w.f64(x);
    for (double x : s.v) w.f64(x);
}

AdamState read_adam(Reader& r) {
    AdamState s;
    s.beta1 = r.f64();
    s.beta2 = r.f64();
    s.eps = r.f64();
    s.step = static_cast<int64_t>(r.u64());
    uint64_t n = r.u64();
    s.m.resize(n);
    for (auto& x : s.m) x = r.f64();
    s.v.resize(n);
    for (auto& x : s.v) x = r.f64();
    return s;
}

}  // namespace

void save_policy(const std::string& path, const PolicyParameters& p, const std::string& meta_json) {
    Writer w(path);
    w.raw(kPolicyMagic, 8);
    write_policy_body(w, p, meta_json);
    w.close(path);
}

PolicyParameters load_policy(const std::string& path, std::string* meta_json) {
    Reader r(path);
    r.expect_magic(kPolicyMagic, "policy parameter");
    return read_policy_body(r, meta_json);
}

void save_checkpoint(const std::string& path, const TrainCheckpoint& ckpt) {
    Writer w(path);
    w.raw(kCkptMagic, 8);
    write_policy_body(w, ckpt.policy, ckpt.meta_json);
    w.u32(static_cast<uint32_t>(ckpt.critic.hidden));
    auto cviews = param_views(const_cast<CriticParameters&>(ckpt.critic));
    w.u32(static_cast<uint32_t>(cviews.size()));
    for (const auto& v : cviews) w.vec(v.name, *v.data);
    write_adam(w, ckpt.policy_opt);
    write_adam(w, ckpt.critic_opt);
    w.u64(static_cast<uint64_t>(ckpt.next_batch));
    w.close(path);
}

TrainCheckpoint load_checkpoint(const std::string& path) {
    Reader r(path);
    r.expect_magic(kCkptMagic, "training checkpoint");
    TrainCheckpoint ckpt;
    ckpt.policy = read_policy_body(r, &ckpt.meta_json);
    uint32_t chidden = r.u32();
    CriticParameters cshape;
    cshape.hidden = static_cast<int>(chidden);
    ckpt.critic = zeros_like(cshape);
    auto cviews = param_views(ckpt.critic);
    uint32_t count = r.u32();
    if (count != cviews.size()) throw std::runtime_error("unexpected tensor count in checkpoint");
    for (auto& v : cviews) r.vec_into(v.name, *v.data);
    ckpt.policy_opt = read_adam(r);
    ckpt.critic_opt = read_adam(r);
    ckpt.next_batch = static_cast<int64_t>(r.u64());
    return ckpt;
}

}  // namespace nlns
