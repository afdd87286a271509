// Copyright (c) 2026 the qmreg authors.
// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmreg/classify.hpp"
#include "qmreg/quat_matrix.hpp"
#include "qmreg/rng.hpp"

namespace qmreg {

/// Loads an 8-bit RGB PNG or binary PPM (P6) as a pure quaternion matrix with
/// channels scaled to [0, 1], bilinearly resized to target_rows x target_cols.
/// Pass 0 for either target to keep the native size.
QuaternionMatrix load_image(const std::string& path, Eigen::Index target_rows = 0,
                            Eigen::Index target_cols = 0);

/// Writes the x/y/z channels as 8-bit RGB; format chosen by extension
/// (.png or .ppm). Channels are clamped to [0, 1] and quantized.
void save_image(const QuaternionMatrix& img, const std::string& path);

QuaternionMatrix resize_bilinear(const QuaternionMatrix& img, Eigen::Index rows,
                                 Eigen::Index cols);

enum class BlockSource { kUnrelatedImage, kNoise };

struct CorruptionRecipe {
  double block_fraction = 0.0;  // occluded area as a fraction of the image, [0, 1)
  BlockSource block_source = BlockSource::kUnrelatedImage;
  std::string patch_path;  // occluder image; empty selects the built-in patch
  double sp_probability = 0.0;     // per-pixel salt & pepper probability
  double gaussian_variance = 0.0;  // zero-mean, per channel
  std::uint64_t seed = 0;
};

struct BlockRect {
  Eigen::Index row0 = 0, col0 = 0, rows = 0, cols = 0;
};

/// Replaces one contiguous block (area ~ block_fraction * M * N, aspect ratio
/// matching the image, position uniform over valid placements) with the patch
/// or with noise. Reports the block through `placed` when given.
QuaternionMatrix occlude_block(const QuaternionMatrix& img,
                               const CorruptionRecipe& recipe, Rng& rng,
                               BlockRect* placed = nullptr);

/// Salt & pepper followed by additive Gaussian noise, channels clamped to
/// [0, 1]. A pixel hit by the salt & pepper coin has each channel driven to 0
/// or 1 independently. `corrupted_mask`, when given, is filled with one flag
/// per pixel (column-major) marking the salt & pepper hits.
QuaternionMatrix add_mixed_noise(const QuaternionMatrix& img,
                                 const CorruptionRecipe& recipe, Rng& rng,
                                 std::vector<std::uint8_t>* corrupted_mask = nullptr);

/// Built-in procedural occluder used when no patch image is supplied.
QuaternionMatrix default_patch(Eigen::Index rows, Eigen::Index cols);

struct SynthDataset {
  LabeledDictionary train;
  std::vector<QuaternionMatrix> test_images;
  std::vector<int> test_labels;
  std::vector<QuaternionMatrix> templates;  // one per class
  double noise_sigma = 0.0;
};

/// Synthetic benchmark: per class a random low-rank (<= 3) pure quaternion
/// template plus small i.i.d. within-class perturbations; templates are
/// resampled until pairwise Frobenius separation reaches 5x the expected
/// perturbation norm. Deterministic per seed.
SynthDataset synth_dataset(int num_classes, int per_class, Eigen::Index rows,
                           Eigen::Index cols, std::uint64_t seed,
                           int test_per_class = 2);

struct ManifestEntry {
  std::string path;
  int class_id = 0;
  bool is_train = false;
};

/// Parses a `path,classId,split` CSV manifest; relative paths resolve against
/// the manifest's directory. Requires at least one train entry per referenced
/// class.
std::vector<ManifestEntry> load_manifest(const std::string& path);

}  // namespace qmreg
