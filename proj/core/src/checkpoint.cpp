#include "nesa/checkpoint.hpp"

#include "nesa/errors.hpp"
#include "nesa/io.hpp"

#include <cstring>

namespace nesa {

namespace {

constexpr char kMagic[8] = {'N', 'E', 'S', 'A', 'C', 'K', 'P', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

void put_u64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

void put_f64(std::string& out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

void put_str(std::string& out, const std::string& s) {
  put_u64(out, s.size());
  out.append(s);
}

struct Reader {
  const std::string& data;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    require(pos + n <= data.size(), ErrorKind::parse, "truncated checkpoint file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, data.data() + pos, 4);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v;
    std::memcpy(&v, data.data() + pos, 8);
    pos += 8;
    return v;
  }
  double f64() {
    need(8);
    double v;
    std::memcpy(&v, data.data() + pos, 8);
    pos += 8;
    return v;
  }
  std::string str() {
    std::uint64_t n = u64();
    need(n);
    std::string s = data.substr(pos, n);
    pos += n;
    return s;
  }
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, SentimentModel& model, long long step,
                     double val_macro_f1_pn) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_str(out, serialize_train_config(model.config()));
  put_str(out, model.vocab().to_text());
  put_u64(out, model.vocab().hash());
  put_u64(out, static_cast<std::uint64_t>(step));
  put_f64(out, val_macro_f1_pn);

  std::vector<Parameter*> params = model.parameters();
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const Parameter* p : params) {
    put_str(out, p->name);
    put_u32(out, static_cast<std::uint32_t>(p->value.rows()));
    put_u32(out, static_cast<std::uint32_t>(p->value.cols()));
    // Eigen stores column-major; dump the raw buffer.
    out.append(reinterpret_cast<const char*>(p->value.data()),
               static_cast<std::size_t>(p->value.size()) * sizeof(double));
  }
  write_file_atomic(path, out);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::string data = read_file(path);
  Reader r{data};
  r.need(sizeof(kMagic));
  require(std::memcmp(data.data(), kMagic, sizeof(kMagic)) == 0, ErrorKind::parse,
          "not a checkpoint file: " + path.string());
  r.pos = sizeof(kMagic);

  TrainConfig config = parse_train_config(r.str());
  Vocabulary vocab = Vocabulary::from_text(r.str());
  std::uint64_t stored_hash = r.u64();
  require(stored_hash == vocab.hash(), ErrorKind::validation,
          "vocabulary hash mismatch in " + path.string());
  auto step = static_cast<long long>(r.u64());
  double val_f1 = r.f64();

  Checkpoint ckpt{SentimentModel::create(config, std::move(vocab)), step, val_f1};
  std::vector<Parameter*> params = ckpt.model.parameters();
  std::uint32_t count = r.u32();
  require(count == params.size(), ErrorKind::validation,
          "checkpoint parameter count mismatch: file has " + std::to_string(count) +
              ", model expects " + std::to_string(params.size()));
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str();
    auto rows = static_cast<Eigen::Index>(r.u32());
    auto cols = static_cast<Eigen::Index>(r.u32());
    Parameter* target = nullptr;
    for (Parameter* p : params) {
      if (p->name == name) {
        target = p;
        break;
      }
    }
    require(target != nullptr, ErrorKind::validation, "unknown checkpoint parameter: " + name);
    require(target->value.rows() == rows && target->value.cols() == cols, ErrorKind::validation,
            "shape mismatch for parameter " + name);
    std::size_t bytes = static_cast<std::size_t>(rows * cols) * sizeof(double);
    r.need(bytes);
    std::memcpy(target->value.data(), data.data() + r.pos, bytes);
    r.pos += bytes;
  }
  require(r.pos == data.size(), ErrorKind::parse, "trailing bytes in checkpoint file");
  return ckpt;
}

}  // namespace nesa
