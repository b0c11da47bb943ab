#include "nesa/train_config.hpp"

#include "nesa/errors.hpp"
#include "nesa/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <map>
#include <sstream>

namespace nesa {

const char* to_string(HeadVariant variant) {
  return variant == HeadVariant::hamam ? "hamam" : "pooled_sentiment";
}

const char* to_string(OptimizerKind kind) { return kind == OptimizerKind::adamw ? "adamw" : "sgd"; }

EncoderConfig TrainConfig::encoder_config() const {
  EncoderConfig ec;
  ec.hidden_size = hidden_size;
  ec.num_layers = num_layers;
  ec.num_heads = num_heads;
  ec.ff_size = ff_size;
  ec.max_seq_len = max_seq_len;
  ec.init_std = init_std;
  return ec;
}

void TrainConfig::validate() const {
  require(epochs >= 1, ErrorKind::config, "epochs must be >= 1");
  require(batch_size >= 1, ErrorKind::config, "batch_size must be >= 1");
  require(backbone_max_lr > 0 && head_max_lr > 0, ErrorKind::config,
          "learning rates must be positive");
  require(warmup_fraction > 0.0 && warmup_fraction < 1.0, ErrorKind::config,
          "warmup_fraction must lie in (0, 1)");
  require(dropout_rate >= 0.0 && dropout_rate < 1.0, ErrorKind::config,
          "dropout_rate must lie in [0, 1)");
  require(dropout_samples >= 1, ErrorKind::config, "dropout_samples must be >= 1");
  require((class_weights.array() > 0.0).all(), ErrorKind::config,
          "class_weights must be positive");
  require(fold_count >= 2, ErrorKind::config, "fold_count must be >= 2");
  if (neutral_threshold) {
    require(*neutral_threshold >= 0.0 && *neutral_threshold <= 1.0, ErrorKind::config,
            "neutral_threshold must lie in [0, 1]");
  }
  require(weight_decay >= 0.0, ErrorKind::config, "weight_decay must be >= 0");
  encoder_config().validate();
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    require(pos == value.size(), ErrorKind::config, "trailing characters in value");
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::config, "key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  require(ec == std::errc() && ptr == value.data() + value.size(), ErrorKind::config,
          "key '" + key + "': cannot parse '" + value + "' as an integer");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  require(ec == std::errc() && ptr == value.data() + value.size(), ErrorKind::config,
          "key '" + key + "': cannot parse '" + value + "' as an unsigned integer");
  return v;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string serialize_train_config(const TrainConfig& c) {
  std::ostringstream out;
  out << "epochs = " << c.epochs << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "backbone_max_lr = " << fmt_double(c.backbone_max_lr) << '\n'
      << "head_max_lr = " << fmt_double(c.head_max_lr) << '\n'
      << "warmup_fraction = " << fmt_double(c.warmup_fraction) << '\n'
      << "dropout_rate = " << fmt_double(c.dropout_rate) << '\n'
      << "dropout_samples = " << c.dropout_samples << '\n'
      << "class_weights = " << fmt_double(c.class_weights(0)) << ',' << fmt_double(c.class_weights(1))
      << ',' << fmt_double(c.class_weights(2)) << '\n'
      << "fold_count = " << c.fold_count << '\n'
      << "seed = " << c.seed << '\n'
      << "neutral_threshold = "
      << (c.neutral_threshold ? fmt_double(*c.neutral_threshold) : std::string("none")) << '\n'
      << "head_variant = " << to_string(c.head_variant) << '\n'
      << "entity_masking = " << (c.entity_masking ? "true" : "false") << '\n'
      << "optimizer = " << to_string(c.optimizer) << '\n'
      << "weight_decay = " << fmt_double(c.weight_decay) << '\n'
      << "grad_clip = " << fmt_double(c.grad_clip) << '\n'
      << "hidden_size = " << c.hidden_size << '\n'
      << "num_layers = " << c.num_layers << '\n'
      << "num_heads = " << c.num_heads << '\n'
      << "ff_size = " << c.ff_size << '\n'
      << "max_seq_len = " << c.max_seq_len << '\n'
      << "init_std = " << fmt_double(c.init_std) << '\n';
  return out.str();
}

TrainConfig parse_train_config(const std::string& text) {
  TrainConfig c;
  std::map<std::string, std::string> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    require(eq != std::string::npos, ErrorKind::config,
            "config line " + std::to_string(line_number) + " is not 'key = value'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    require(!key.empty(), ErrorKind::config,
            "config line " + std::to_string(line_number) + " has an empty key");
    auto [it, inserted] = entries.emplace(key, value);
    require(inserted, ErrorKind::config, "duplicate config key '" + key + "'");
  }

  for (const auto& [key, value] : entries) {
    if (key == "epochs") {
      c.epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "batch_size") {
      c.batch_size = static_cast<int>(parse_int(key, value));
    } else if (key == "backbone_max_lr") {
      c.backbone_max_lr = parse_double(key, value);
    } else if (key == "head_max_lr") {
      c.head_max_lr = parse_double(key, value);
    } else if (key == "warmup_fraction") {
      c.warmup_fraction = parse_double(key, value);
    } else if (key == "dropout_rate") {
      c.dropout_rate = parse_double(key, value);
    } else if (key == "dropout_samples") {
      c.dropout_samples = static_cast<int>(parse_int(key, value));
    } else if (key == "class_weights") {
      std::istringstream ws(value);
      std::string part;
      int i = 0;
      while (std::getline(ws, part, ',')) {
        require(i < kNumClasses, ErrorKind::config, "class_weights needs exactly 3 values");
        c.class_weights(i++) = parse_double(key, trim(part));
      }
      require(i == kNumClasses, ErrorKind::config, "class_weights needs exactly 3 values");
    } else if (key == "fold_count") {
      c.fold_count = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      c.seed = parse_u64(key, value);
    } else if (key == "neutral_threshold") {
      if (value == "none") {
        c.neutral_threshold.reset();
      } else {
        c.neutral_threshold = parse_double(key, value);
      }
    } else if (key == "head_variant") {
      if (value == "hamam") {
        c.head_variant = HeadVariant::hamam;
      } else if (value == "pooled_sentiment") {
        c.head_variant = HeadVariant::pooled_sentiment;
      } else {
        fail(ErrorKind::config, "head_variant must be hamam or pooled_sentiment");
      }
    } else if (key == "entity_masking") {
      require(value == "true" || value == "false", ErrorKind::config,
              "entity_masking must be true or false");
      c.entity_masking = value == "true";
    } else if (key == "optimizer") {
      if (value == "adamw") {
        c.optimizer = OptimizerKind::adamw;
      } else if (value == "sgd") {
        c.optimizer = OptimizerKind::sgd;
      } else {
        fail(ErrorKind::config, "optimizer must be adamw or sgd");
      }
    } else if (key == "weight_decay") {
      c.weight_decay = parse_double(key, value);
    } else if (key == "grad_clip") {
      c.grad_clip = parse_double(key, value);
    } else if (key == "hidden_size") {
      c.hidden_size = static_cast<int>(parse_int(key, value));
    } else if (key == "num_layers") {
      c.num_layers = static_cast<int>(parse_int(key, value));
    } else if (key == "num_heads") {
      c.num_heads = static_cast<int>(parse_int(key, value));
    } else if (key == "ff_size") {
      c.ff_size = static_cast<int>(parse_int(key, value));
    } else if (key == "max_seq_len") {
      c.max_seq_len = static_cast<int>(parse_int(key, value));
    } else if (key == "init_std") {
      c.init_std = parse_double(key, value);
    } else {
      fail(ErrorKind::config, "unknown config key '" + key + "'");
    }
  }

  c.validate();
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  return parse_train_config(read_file(path));
}

}  // namespace nesa
