#include "checkers/nn.hpp"

#include <cstring>
#include <fstream>

namespace checkers {

const char* sharing_name(Sharing s) {
    switch (s) {
        case Sharing::FullyIndependent: return "independent";
        case Sharing::SharedEncoder: return "shared-encoder";
        case Sharing::FullyShared: return "fully-shared";
    }
    return "?";
}

Sharing parse_sharing(const std::string& name) {
    if (name == "independent" || name == "fully-independent") return Sharing::FullyIndependent;
    if (name == "shared-encoder") return Sharing::SharedEncoder;
    if (name == "fully-shared") return Sharing::FullyShared;
    throw std::invalid_argument("unknown sharing config: " + name);
}

namespace {

constexpr uint32_t kMagic = 0x31504b43;  // "CKP1"
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("truncated checkpoint");
    return v;
}

void write_payload(std::ostream& os, const Mat<float>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) write_pod(os, m(r, c));
}

void read_payload(std::istream& is, Mat<float>& m, uint32_t rows, uint32_t cols) {
    m.resize(rows, cols);
    for (uint32_t r = 0; r < rows; ++r)
        for (uint32_t c = 0; c < cols; ++c) m(r, c) = read_pod<float>(is);
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
    auto& params = const_cast<PolicySet<float>&>(ck.params);
    auto tensors = named_tensors(params);
    if (ck.has_adam && ck.adam.size() != tensors.size())
        throw std::logic_error("adam state count mismatch");

    write_pod(os, kMagic);
    write_pod(os, kVersion);
    write_pod(os, static_cast<int32_t>(ck.n));
    write_pod(os, static_cast<uint8_t>(ck.sharing));
    write_pod(os, static_cast<uint8_t>(ck.has_adam ? 1 : 0));
    write_pod(os, static_cast<int32_t>(ck.iteration));
    write_pod(os, static_cast<int64_t>(ck.env_steps));
    write_pod(os, static_cast<uint64_t>(ck.seed));
    write_pod(os, static_cast<uint32_t>(tensors.size()));
    for (size_t i = 0; i < tensors.size(); ++i) {
        const auto& t = tensors[i];
        write_pod(os, static_cast<uint16_t>(t.name.size()));
        os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        write_pod(os, static_cast<uint32_t>(t.data->rows()));
        write_pod(os, static_cast<uint32_t>(t.data->cols()));
        write_pod(os, static_cast<int64_t>(ck.has_adam ? ck.adam[i].t : 0));
        write_payload(os, *t.data);
        if (ck.has_adam) {
            write_payload(os, ck.adam[i].m);
            write_payload(os, ck.adam[i].v);
        }
    }
    if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read checkpoint: " + path);
    if (read_pod<uint32_t>(is) != kMagic) throw std::runtime_error("not a checkpoint: " + path);
    if (read_pod<uint32_t>(is) != kVersion)
        throw std::runtime_error("unsupported checkpoint version: " + path);
    Checkpoint ck;
    ck.n = read_pod<int32_t>(is);
    ck.sharing = static_cast<Sharing>(read_pod<uint8_t>(is));
    ck.has_adam = read_pod<uint8_t>(is) != 0;
    ck.iteration = read_pod<int32_t>(is);
    ck.env_steps = read_pod<int64_t>(is);
    ck.seed = read_pod<uint64_t>(is);
    uint32_t count = read_pod<uint32_t>(is);

    ck.params.sharing = ck.sharing;
    ck.params.n = ck.n;
    ck.params.enc.resize(ck.sharing == Sharing::FullyIndependent ? 6 : 1);
    ck.params.pi.resize(ck.sharing == Sharing::FullyShared ? 1 : 6);
    ck.params.vf.resize(ck.params.pi.size());
    auto tensors = named_tensors(ck.params);
    if (count != tensors.size()) throw std::runtime_error("tensor count mismatch: " + path);
    if (ck.has_adam) ck.adam.resize(tensors.size());

    for (size_t i = 0; i < tensors.size(); ++i) {
        uint16_t len = read_pod<uint16_t>(is);
        std::string name(len, '\0');
        is.read(name.data(), len);
        if (name != tensors[i].name)
            throw std::runtime_error("tensor name mismatch: expected " + tensors[i].name +
                                     ", got " + name);
        uint32_t rows = read_pod<uint32_t>(is);
        uint32_t cols = read_pod<uint32_t>(is);
        int64_t t = read_pod<int64_t>(is);
        read_payload(is, *tensors[i].data, rows, cols);
        if (ck.has_adam) {
            ck.adam[i].t = t;
            read_payload(is, ck.adam[i].m, rows, cols);
            read_payload(is, ck.adam[i].v, rows, cols);
        }
    }
    return ck;
}

}  // namespace checkers
