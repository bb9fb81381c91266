// Copyright 2026 The vidtex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "vidtex/error.h"
#include "vidtex/sampler.h"
#include "vidtex/serialize.h"
#include "vidtex/synthetic.h"
#include "vidtex/training.h"

namespace vidtex {
namespace {

namespace fs = std::filesystem;

TrainConfig TinyConfig() {
  TrainConfig c;
  c.clip_len = 4;
  c.coarsest = 8;
  c.finest = 12;
  c.num_scales = 2;
  c.steps_per_scale = 3;
  c.d_steps = 1;
  c.g_steps = 1;
  c.hidden_channels = 4;
  c.seed = 21;
  return c;
}

const PyramidModel& TinyModel() {
  static const PyramidModel model = [] {
    SyntheticSpec s;
    s.frames = 6;
    s.size = 12;
    return TrainPyramid(MakeSynthetic(s), TinyConfig());
  }();
  return model;
}

class ModelDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("vidtex_model_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

void Rewrite(const fs::path& path, const std::string& from, const std::string& to) {
  std::string text = ReadTextFile(path);
  const size_t at = text.find(from);
  ASSERT_NE(at, std::string::npos) << from;
  text.replace(at, from.size(), to);
  WriteTextFile(path, text);
}

TEST_F(ModelDir, RoundTripIsBitExact) {
  const PyramidModel& m = TinyModel();
  SaveModel(m, dir_);
  const PyramidModel back = LoadModel(dir_);
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.frames, m.frames);
  ASSERT_EQ(back.scales.size(), m.scales.size());
  EXPECT_EQ(back.schedule.dims, m.schedule.dims);
  EXPECT_DOUBLE_EQ(back.schedule.r(), m.schedule.r());
  for (size_t n = 0; n < m.scales.size(); ++n) {
    EXPECT_EQ(ParameterHash(back.scales[n]), ParameterHash(m.scales[n]));
    EXPECT_EQ(back.scales[n].noise_amp, m.scales[n].noise_amp);
    EXPECT_EQ(back.scales[n].final_rec_loss, m.scales[n].final_rec_loss);
  }
  EXPECT_EQ(Sample(back, 5), Sample(m, 5));
  EXPECT_EQ(Reconstruct(back), Reconstruct(m));
  // Saving the reloaded model again produces identical files.
  const fs::path again = dir_ / "again";
  SaveModel(back, again);
  for (const char* f : {"manifest.txt", "scale_00.bin", "scale_01.bin"}) {
    EXPECT_EQ(ReadTextFile(dir_ / f), ReadTextFile(again / f)) << f;
  }
}

TEST_F(ModelDir, CorruptFilesRaiseDataError) {
  SaveModel(TinyModel(), dir_);
  {
    std::string blob = ReadTextFile(dir_ / "scale_01.bin");
    blob.pop_back();
    WriteTextFile(dir_ / "scale_01.bin", blob);
  }
  EXPECT_THROW(LoadModel(dir_), DataError);
  SaveModel(TinyModel(), dir_);
  Rewrite(dir_ / "manifest.txt", "format = vidtex-model-1", "format = other-2");
  EXPECT_THROW(LoadModel(dir_), DataError);
  SaveModel(TinyModel(), dir_);
  Rewrite(dir_ / "manifest.txt", "num_scales = 2", "num_scales = 3");
  EXPECT_THROW(LoadModel(dir_), DataError);
  SaveModel(TinyModel(), dir_);
  Rewrite(dir_ / "manifest.txt", "config.hidden_channels = 4", "config.hidden_channels = 5");
  EXPECT_THROW(LoadModel(dir_), DataError);
  fs::remove(dir_ / "scale_00.bin");
  EXPECT_THROW(LoadModel(dir_), DataError);
  EXPECT_THROW(LoadModel(dir_ / "missing"), DataError);
}

TEST(KeyValueTest, ParsesAndRejects) {
  const auto kv = ParseKeyValues("a = 1\n  b=two words  # note\n\n# skip\n");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two words");
  EXPECT_THROW(ParseKeyValues("a = 1\na = 2\n"), DataError);
  EXPECT_THROW(ParseKeyValues("just text\n"), DataError);
}

TEST(SamplerTest, ShapeRangeAndSeeds) {
  const PyramidModel& m = TinyModel();
  const VideoClip a = Sample(m, 1);
  EXPECT_EQ(a.shape(), Shape(1, 3, 4, 12, 12));
  EXPECT_TRUE(a.InRange());
  EXPECT_EQ(a, Sample(m, 1));
  EXPECT_NE(a, Sample(m, 2));
}

TEST(SamplerTest, ReconstructionIgnoresSeedAndMatchesLoggedLoss) {
  const PyramidModel& m = TinyModel();
  const VideoClip r = Reconstruct(m);
  Sample(m, 99);
  EXPECT_EQ(Reconstruct(m), r);
  SyntheticSpec s;
  s.frames = 6;
  s.size = 12;
  const TrainingData d = PrepareTrainingData(MakeSynthetic(s), TinyConfig());
  double se = 0;
  for (int64_t i = 0; i < r.tensor().numel(); ++i) {
    const double diff = r.tensor()[i] - d.rec_targets[1].tensor()[i];
    se += diff * diff;
  }
  EXPECT_NEAR(se / static_cast<double>(r.tensor().numel()), m.scales.back().final_rec_loss, 1e-5);
}

TEST(SamplerTest, ArbitrarySizeScalesEveryLevel) {
  const PyramidModel& m = TinyModel();
  const auto dims = ScaledDims(m.schedule, SpatialDims{24, 18});
  ASSERT_EQ(dims.size(), 2u);
  EXPECT_EQ(dims[0].height, 16);
  EXPECT_EQ(dims[0].width, 12);
  EXPECT_EQ(dims[1].height, 24);
  EXPECT_EQ(dims[1].width, 18);
  const VideoClip big = Sample(m, 3, SpatialDims{24, 18});
  EXPECT_EQ(big.shape(), Shape(1, 3, 4, 24, 18));
  EXPECT_TRUE(big.InRange());
  EXPECT_EQ(Sample(m, 3, SpatialDims{12, 12}), Sample(m, 3));
}

TEST(SamplerTest, EmptyModelThrows) {
  EXPECT_THROW(Sample(PyramidModel{}, 1), std::logic_error);
}

}  // namespace
}  // namespace vidtex
