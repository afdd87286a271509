// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#include "qmreg/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <png.h>

namespace qmreg {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// 8-bit RGB raster, row-major.
struct Raster {
  Eigen::Index rows = 0, cols = 0;
  std::vector<unsigned char> rgb;
};

QuaternionMatrix raster_to_quaternion(const Raster& r) {
  QuaternionMatrix out(r.rows, r.cols);
  for (Eigen::Index i = 0; i < r.rows; ++i)
    for (Eigen::Index j = 0; j < r.cols; ++j) {
      const unsigned char* px = &r.rgb[3 * (i * r.cols + j)];
      out.component(1)(i, j) = px[0] / 255.0;
      out.component(2)(i, j) = px[1] / 255.0;
      out.component(3)(i, j) = px[2] / 255.0;
    }
  return out;
}

unsigned char quantize(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(clamped * 255.0));
}

Raster quaternion_to_raster(const QuaternionMatrix& img) {
  Raster r;
  r.rows = img.rows();
  r.cols = img.cols();
  r.rgb.resize(static_cast<size_t>(3 * r.rows * r.cols));
  for (Eigen::Index i = 0; i < r.rows; ++i)
    for (Eigen::Index j = 0; j < r.cols; ++j) {
      unsigned char* px = &r.rgb[3 * (i * r.cols + j)];
      px[0] = quantize(img.component(1)(i, j));
      px[1] = quantize(img.component(2)(i, j));
      px[2] = quantize(img.component(3)(i, j));
    }
  return r;
}

int ppm_next_token(std::FILE* f) {
  // Skips whitespace and '#' comments, returns the next nonnegative integer.
  int ch = std::fgetc(f);
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = std::fgetc(f);
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = std::fgetc(f);
  }
  if (ch == EOF || !std::isdigit(ch)) throw IoError("ppm: malformed header");
  int value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    ch = std::fgetc(f);
  }
  return value;
}

Raster read_ppm(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open " + path);
  char magic[2];
  if (std::fread(magic, 1, 2, f.get()) != 2 || magic[0] != 'P' || magic[1] != '6')
    throw UnsupportedFormat("not a binary PPM (P6): " + path);
  const int cols = ppm_next_token(f.get());
  const int rows = ppm_next_token(f.get());
  const int maxval = ppm_next_token(f.get());
  if (maxval != 255)
    throw UnsupportedFormat("ppm: only 8-bit maxval 255 is supported: " + path);
  if (rows <= 0 || cols <= 0) throw IoError("ppm: bad dimensions in " + path);
  Raster r;
  r.rows = rows;
  r.cols = cols;
  r.rgb.resize(static_cast<size_t>(3) * rows * cols);
  if (std::fread(r.rgb.data(), 1, r.rgb.size(), f.get()) != r.rgb.size())
    throw IoError("ppm: truncated pixel data in " + path);
  return r;
}

void write_ppm(const Raster& r, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::fprintf(f.get(), "P6\n%ld %ld\n255\n", static_cast<long>(r.cols),
               static_cast<long>(r.rows));
  if (std::fwrite(r.rgb.data(), 1, r.rgb.size(), f.get()) != r.rgb.size())
    throw IoError("ppm: short write to " + path);
}

Raster read_png(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open " + path);
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw UnsupportedFormat("not a PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png: allocation failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png: allocation failure");
  }

  Raster r;
  std::vector<png_bytep> row_ptrs;
  volatile bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;  // libpng error; fall through to cleanup
  } else {
    png_init_io(png, f.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_uint_32 width = 0, height = 0;
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
                 nullptr, nullptr);

    // Normalize everything to 8-bit RGB.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
      png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != 3 * width) {
      longjmp(png_jmpbuf(png), 1);
    }
    r.rows = static_cast<Eigen::Index>(height);
    r.cols = static_cast<Eigen::Index>(width);
    r.rgb.resize(static_cast<size_t>(3) * height * width);
    row_ptrs.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
      row_ptrs[y] = r.rgb.data() + static_cast<size_t>(3) * width * y;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (failed) throw IoError("png: failed to decode " + path);
  return r;
}

void write_png(const Raster& r, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open " + path + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png: allocation failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png: allocation failure");
  }

  std::vector<png_bytep> row_ptrs(r.rows);
  std::vector<unsigned char> pixels = r.rgb;  // libpng wants non-const rows
  for (Eigen::Index y = 0; y < r.rows; ++y)
    row_ptrs[y] = pixels.data() + static_cast<size_t>(3) * r.cols * y;

  volatile bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(r.cols),
                 static_cast<png_uint_32>(r.rows), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  if (failed) throw IoError("png: failed to encode " + path);
}

bool has_png_magic(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open " + path);
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8) return false;
  return png_sig_cmp(sig, 0, 8) == 0;
}

std::string lower_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

QuaternionMatrix load_image(const std::string& path, Eigen::Index target_rows,
                            Eigen::Index target_cols) {
  const Raster raster = has_png_magic(path) ? read_png(path) : read_ppm(path);
  QuaternionMatrix img = raster_to_quaternion(raster);
  if (target_rows > 0 && target_cols > 0)
    img = resize_bilinear(img, target_rows, target_cols);
  return img;
}

void save_image(const QuaternionMatrix& img, const std::string& path) {
  const Raster raster = quaternion_to_raster(img);
  const std::string ext = lower_extension(path);
  if (ext == ".png")
    write_png(raster, path);
  else if (ext == ".ppm")
    write_ppm(raster, path);
  else
    throw UnsupportedFormat("save_image: use a .png or .ppm extension: " + path);
}

QuaternionMatrix resize_bilinear(const QuaternionMatrix& img, Eigen::Index rows,
                                 Eigen::Index cols) {
  if (rows < 1 || cols < 1) throw ShapeMismatch("resize_bilinear: bad target size");
  if (rows == img.rows() && cols == img.cols()) return img;
  const double sr = rows > 1 ? double(img.rows() - 1) / double(rows - 1) : 0.0;
  const double sc = cols > 1 ? double(img.cols() - 1) / double(cols - 1) : 0.0;
  QuaternionMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double fi = i * sr;
    const Eigen::Index i0 = static_cast<Eigen::Index>(fi);
    const Eigen::Index i1 = std::min(i0 + 1, img.rows() - 1);
    const double wi = fi - i0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double fj = j * sc;
      const Eigen::Index j0 = static_cast<Eigen::Index>(fj);
      const Eigen::Index j1 = std::min(j0 + 1, img.cols() - 1);
      const double wj = fj - j0;
      for (int c = 0; c < 4; ++c) {
        const auto& p = img.component(c);
        out.component(c)(i, j) = (1 - wi) * ((1 - wj) * p(i0, j0) + wj * p(i0, j1)) +
                                 wi * ((1 - wj) * p(i1, j0) + wj * p(i1, j1));
      }
    }
  }
  return out;
}

QuaternionMatrix occlude_block(const QuaternionMatrix& img,
                               const CorruptionRecipe& recipe, Rng& rng,
                               BlockRect* placed) {
  if (recipe.block_fraction < 0.0 || recipe.block_fraction >= 1.0 + 1e-12)
    throw ConfigError("occlude_block: block_fraction must lie in [0, 1)");
  if (placed) *placed = BlockRect{};
  if (recipe.block_fraction == 0.0) return img;

  const Eigen::Index m = img.rows();
  const Eigen::Index n = img.cols();
  const double area = recipe.block_fraction * double(m) * double(n);
  const Eigen::Index bh = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::llround(m * std::sqrt(recipe.block_fraction))),
      1, m);
  const Eigen::Index bw = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::llround(area / double(bh))), 1, n);

  const Eigen::Index r0 = static_cast<Eigen::Index>(rng.below(m - bh + 1));
  const Eigen::Index c0 = static_cast<Eigen::Index>(rng.below(n - bw + 1));
  if (placed) *placed = BlockRect{r0, c0, bh, bw};

  QuaternionMatrix patch(bh, bw);
  if (recipe.block_source == BlockSource::kNoise) {
    for (Eigen::Index j = 0; j < bw; ++j)
      for (Eigen::Index i = 0; i < bh; ++i)
        for (int c = 1; c < 4; ++c) patch.component(c)(i, j) = rng.uniform();
  } else if (!recipe.patch_path.empty()) {
    patch = load_image(recipe.patch_path, bh, bw);
  } else {
    patch = default_patch(bh, bw);
  }

  QuaternionMatrix out = img;
  for (int c = 0; c < 4; ++c)
    out.component(c).block(r0, c0, bh, bw) = patch.component(c);
  return out;
}

QuaternionMatrix add_mixed_noise(const QuaternionMatrix& img,
                                 const CorruptionRecipe& recipe, Rng& rng,
                                 std::vector<std::uint8_t>* corrupted_mask) {
  if (recipe.sp_probability < 0.0 || recipe.sp_probability > 1.0)
    throw ConfigError("add_mixed_noise: sp_probability must lie in [0, 1]");
  if (recipe.gaussian_variance < 0.0)
    throw ConfigError("add_mixed_noise: negative gaussian_variance");

  const Eigen::Index m = img.rows();
  const Eigen::Index n = img.cols();
  QuaternionMatrix out = img;
  if (corrupted_mask) corrupted_mask->assign(static_cast<size_t>(m * n), 0);
  if (recipe.sp_probability == 0.0 && recipe.gaussian_variance == 0.0) return out;

  if (recipe.sp_probability > 0.0) {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < m; ++i)
        if (rng.uniform() < recipe.sp_probability) {
          if (corrupted_mask) (*corrupted_mask)[j * m + i] = 1;
          for (int c = 1; c < 4; ++c)
            out.component(c)(i, j) = rng.uniform() < 0.5 ? 0.0 : 1.0;
        }
  }

  if (recipe.gaussian_variance > 0.0) {
    const double sigma = std::sqrt(recipe.gaussian_variance);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < m; ++i)
        for (int c = 1; c < 4; ++c)
          out.component(c)(i, j) += sigma * rng.normal();
  }

  for (int c = 1; c < 4; ++c)
    out.component(c) = out.component(c).cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

QuaternionMatrix default_patch(Eigen::Index rows, Eigen::Index cols) {
  QuaternionMatrix patch(rows, cols);
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      patch.component(1)(i, j) =
          0.5 + 0.5 * std::sin(two_pi * 1.5 * i / std::max<Eigen::Index>(rows, 2) + 0.7);
      patch.component(2)(i, j) =
          0.5 + 0.5 * std::sin(two_pi * 2.0 * j / std::max<Eigen::Index>(cols, 2) + 1.3);
      patch.component(3)(i, j) = ((i / 3 + j / 3) % 2 == 0) ? 0.2 : 0.8;
    }
  return patch;
}

namespace {

QuaternionMatrix random_low_rank_template(Eigen::Index rows, Eigen::Index cols,
                                          Rng& rng) {
  QuaternionMatrix t(rows, cols);
  for (int term = 0; term < 3; ++term) {
    Eigen::VectorXd u(rows), v(cols);
    for (Eigen::Index i = 0; i < rows; ++i) u(i) = rng.uniform();
    for (Eigen::Index j = 0; j < cols; ++j) v(j) = rng.uniform();
    const Eigen::MatrixXd outer = u * v.transpose();
    for (int c = 1; c < 4; ++c) t.component(c) += rng.uniform() * outer;
  }
  double peak = 0.0;
  for (int c = 1; c < 4; ++c) peak = std::max(peak, t.component(c).maxCoeff());
  if (peak > 0.0)
    for (int c = 1; c < 4; ++c) t.component(c) /= peak;
  return t;
}

QuaternionMatrix perturbed_sample(const QuaternionMatrix& tmpl, double sigma,
                                  Rng& rng) {
  QuaternionMatrix s = tmpl;
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      for (int c = 1; c < 4; ++c) s.component(c)(i, j) += sigma * rng.normal();
  for (int c = 1; c < 4; ++c)
    s.component(c) = s.component(c).cwiseMax(0.0).cwiseMin(1.0);
  return s;
}

}  // namespace

SynthDataset synth_dataset(int num_classes, int per_class, Eigen::Index rows,
                           Eigen::Index cols, std::uint64_t seed,
                           int test_per_class) {
  if (num_classes < 2) throw ConfigError("synth_dataset: need at least 2 classes");
  if (per_class < 1) throw ConfigError("synth_dataset: per_class must be >= 1");
  if (test_per_class < 0) throw ConfigError("synth_dataset: negative test_per_class");
  if (rows < 2 || cols < 2) throw ConfigError("synth_dataset: image too small");

  Rng rng(seed);
  SynthDataset ds;
  ds.noise_sigma = 0.02;
  const double noise_scale = ds.noise_sigma * std::sqrt(3.0 * rows * cols);

  for (int k = 0; k < num_classes; ++k) {
    QuaternionMatrix tmpl;
    bool separated = false;
    for (int attempt = 0; attempt < 1000 && !separated; ++attempt) {
      tmpl = random_low_rank_template(rows, cols, rng);
      separated = true;
      for (const auto& other : ds.templates)
        if ((tmpl - other).frobenius_norm() < 5.0 * noise_scale) {
          separated = false;
          break;
        }
    }
    if (!separated)
      throw Error("synth_dataset: could not separate class templates");
    ds.templates.push_back(std::move(tmpl));
  }

  ds.train.num_classes = num_classes;
  for (int k = 0; k < num_classes; ++k)
    for (int s = 0; s < per_class; ++s) {
      ds.train.images.push_back(perturbed_sample(ds.templates[k], ds.noise_sigma, rng));
      ds.train.labels.push_back(k + 1);
    }
  for (int k = 0; k < num_classes; ++k)
    for (int s = 0; s < test_per_class; ++s) {
      ds.test_images.push_back(perturbed_sample(ds.templates[k], ds.noise_sigma, rng));
      ds.test_labels.push_back(k + 1);
    }
  return ds;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<ManifestEntry> entries;
  std::set<int> train_classes, all_classes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string file, cls, split;
    if (!std::getline(ss, file, ',') || !std::getline(ss, cls, ',') ||
        !std::getline(ss, split))
      throw ConfigError("manifest line " + std::to_string(line_no) +
                        ": expected path,classId,split");
    ManifestEntry e;
    try {
      e.class_id = std::stoi(cls);
    } catch (const std::exception&) {
      throw ConfigError("manifest line " + std::to_string(line_no) + ": bad class id");
    }
    if (e.class_id < 1)
      throw ConfigError("manifest line " + std::to_string(line_no) +
                        ": class ids start at 1");
    if (split == "train")
      e.is_train = true;
    else if (split == "test")
      e.is_train = false;
    else
      throw ConfigError("manifest line " + std::to_string(line_no) +
                        ": split must be train or test");
    std::filesystem::path p(file);
    e.path = p.is_absolute() ? p.string() : (base / p).string();
    if (!std::filesystem::exists(e.path))
      throw IoError("manifest line " + std::to_string(line_no) +
                    ": missing image " + e.path);
    all_classes.insert(e.class_id);
    if (e.is_train) train_classes.insert(e.class_id);
    entries.push_back(std::move(e));
  }
  for (int cls : all_classes)
    if (!train_classes.count(cls))
      throw ConfigError("manifest: class " + std::to_string(cls) +
                        " has no train entries");
  return entries;
}

}  // namespace qmreg
