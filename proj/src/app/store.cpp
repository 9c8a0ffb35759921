#include "ftvp/app/store.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ftvp/numerics/error.hpp"

namespace ftvp::app {

namespace {

constexpr char kMagic[8] = {'F', 'T', 'V', 'P', 'C', 'O', 'L', '1'};

template <class U>
void put(std::string& out, U v) {
  for (size_t i = 0; i < sizeof(U); ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& s;
  size_t pos = 0;
  template <class U>
  U get() {
    if (pos + sizeof(U) > s.size()) throw Error(Errc::Io, "store truncated");
    U v = 0;
    for (size_t i = 0; i < sizeof(U); ++i) v |= U(static_cast<unsigned char>(s[pos + i])) << (8 * i);
    pos += sizeof(U);
    return v;
  }
  std::string bytes(size_t n) {
    if (pos + n > s.size()) throw Error(Errc::Io, "store truncated");
    std::string out = s.substr(pos, n);
    pos += n;
    return out;
  }
};

}  // namespace

int Table::col(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return int(i);
  return -1;
}

std::string encode_table(const Mat& data, const std::vector<std::string>& columns) {
  if (int(columns.size()) != data.cols()) throw Error(Errc::DimensionMismatch, "column names do not match the data");
  std::string out(kMagic, 8);
  put<uint32_t>(out, kStoreVersion);
  put<uint32_t>(out, uint32_t(columns.size()));
  put<uint64_t>(out, uint64_t(data.rows()));
  for (const auto& c : columns) {
    put<uint32_t>(out, uint32_t(c.size()));
    out += c;
  }
  out.reserve(out.size() + 8 * data.size());
  for (int j = 0; j < data.cols(); ++j)
    for (int i = 0; i < data.rows(); ++i) put<uint64_t>(out, std::bit_cast<uint64_t>(data(i, j)));
  return out;
}

Table decode_table(const std::string& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) throw Error(Errc::Io, "not an FTVPCOL1 store");
  Reader r{bytes, 8};
  const uint32_t version = r.get<uint32_t>();
  if (version != kStoreVersion) throw Error(Errc::Io, "unsupported store version " + std::to_string(version));
  const uint32_t C = r.get<uint32_t>();
  const uint64_t R = r.get<uint64_t>();
  Table t;
  for (uint32_t j = 0; j < C; ++j) t.columns.push_back(r.bytes(r.get<uint32_t>()));
  if (bytes.size() - r.pos != 8 * R * C) throw Error(Errc::Io, "store payload has the wrong size");
  t.data.resize(Eigen::Index(R), Eigen::Index(C));
  for (uint32_t j = 0; j < C; ++j)
    for (uint64_t i = 0; i < R; ++i) t.data(Eigen::Index(i), j) = std::bit_cast<double>(r.get<uint64_t>());
  return t;
}

void write_table(const std::string& path, const Mat& data, const std::vector<std::string>& columns,
                 const nlohmann::json& meta) {
  const std::string bytes = encode_table(data, columns);
  std::ofstream f(path, std::ios::binary);
  if (!f.write(bytes.data(), std::streamsize(bytes.size()))) throw Error(Errc::Io, "cannot write " + path);
  nlohmann::json side = {{"format", "FTVPCOL1"},
                         {"version", kStoreVersion},
                         {"rows", data.rows()},
                         {"columns", columns},
                         {"meta", meta}};
  std::ofstream s(path + ".json");
  if (!(s << side.dump(2) << '\n')) throw Error(Errc::Io, "cannot write " + path + ".json");
}

Table read_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Table t = decode_table(bytes);
  std::ifstream s(path + ".json");
  if (s) t.meta = nlohmann::json::parse(s).value("meta", nlohmann::json::object());
  return t;
}

}  // namespace ftvp::app
