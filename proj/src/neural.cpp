#include "chesty/neural.hpp"

#include <bit>
#include <cstring>

namespace chesty::nn {

namespace {

constexpr char kMagic[8] = {'C', 'H', 'E', 'S', 'T', 'Y', 'N', 'N'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t get_u32(std::string_view in, std::size_t& pos) {
    if (pos + 4 > in.size()) throw FormatError("checkpoint truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    pos += 4;
    return v;
}

void put_array(std::string& out, const float* data, Index n) {
    for (Index i = 0; i < n; ++i) put_u32(out, std::bit_cast<std::uint32_t>(data[i]));
}

void get_array(std::string_view in, std::size_t& pos, float* data, Index n) {
    for (Index i = 0; i < n; ++i) data[i] = std::bit_cast<float>(get_u32(in, pos));
}

}  // namespace

std::string checkpoint_bytes(const Architecture& arch, const LayerParams<float>& params) {
    params.check(arch);
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, kCheckpointVersion);
    for (Index v : {arch.input_dim, arch.input_length, arch.dense_vectors, arch.num_filters, arch.kernel})
        put_u32(out, static_cast<std::uint32_t>(v));
    auto copy = params;
    for (auto& a : copy.arrays()) put_array(out, a.data(), a.size());
    return out;
}

ConvTextModel<float> model_from_checkpoint_bytes(std::string_view bytes) {
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw FormatError("not a model checkpoint");
    std::size_t pos = sizeof kMagic;
    if (get_u32(bytes, pos) != kCheckpointVersion) throw FormatError("unsupported checkpoint version");
    Architecture arch;
    arch.input_dim = get_u32(bytes, pos);
    arch.input_length = get_u32(bytes, pos);
    arch.dense_vectors = get_u32(bytes, pos);
    arch.num_filters = get_u32(bytes, pos);
    arch.kernel = get_u32(bytes, pos);
    arch.validate();
    auto params = LayerParams<float>::zeros(arch);
    for (auto& a : params.arrays()) get_array(bytes, pos, a.data(), a.size());
    if (pos != bytes.size()) throw FormatError("trailing bytes in checkpoint");
    return ConvTextModel<float>(arch, std::move(params));
}

void save_checkpoint(const ConvTextModel<float>& model, const std::filesystem::path& path) {
    write_file(path, checkpoint_bytes(model.architecture(), model.params()));
}

ConvTextModel<float> load_checkpoint(const std::filesystem::path& path) {
    return model_from_checkpoint_bytes(read_file(path));
}

}  // namespace chesty::nn
