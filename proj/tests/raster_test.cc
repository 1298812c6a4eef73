#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "instyle/image.hpp"
#include "instyle/png_io.hpp"
#include "test_support.hpp"

namespace instyle {
namespace {

namespace fs = std::filesystem;
using testing::fresh_temp_dir;
using testing::reference_read_rgb;
using testing::reference_write;

class RasterTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = fresh_temp_dir("raster"); }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(RasterTest, LoadsRgbBytesAsUnitFractions) {
  reference_write(dir_ / "px.png", 1, 1, PNG_FORMAT_RGB, {255, 0, 128});
  const ImageTensor img = load_image(dir_ / "px.png");
  ASSERT_EQ(img.height(), 1);
  ASSERT_EQ(img.width(), 1);
  ASSERT_EQ(img.channels(), 3);
  EXPECT_EQ(img(0, 0, 0), 1.0);
  EXPECT_EQ(img(0, 0, 1), 0.0);
  EXPECT_EQ(img(0, 0, 2), 128.0 / 255.0);
}

TEST_F(RasterTest, BlackImageLoadsAsZeros) {
  reference_write(dir_ / "black.png", 4, 4, PNG_FORMAT_RGB, std::vector<std::uint8_t>(48, 0));
  const ImageTensor img = load_image(dir_ / "black.png");
  for (Index ch = 0; ch < 3; ++ch) EXPECT_TRUE(img.plane(ch).isZero(0.0));
}

TEST_F(RasterTest, GrayIsReplicatedAndAlphaDropped) {
  reference_write(dir_ / "g.png", 2, 1, PNG_FORMAT_GRAY, {10, 200});
  const ImageTensor g = load_image(dir_ / "g.png");
  for (Index ch = 0; ch < 3; ++ch) {
    EXPECT_EQ(g(0, 0, ch), 10 / 255.0);
    EXPECT_EQ(g(0, 1, ch), 200 / 255.0);
  }
  reference_write(dir_ / "a.png", 1, 1, PNG_FORMAT_RGBA, {1, 2, 3, 0});
  const ImageTensor a = load_image(dir_ / "a.png");
  EXPECT_EQ(a.channels(), 3);
  EXPECT_EQ(a(0, 0, 2), 3 / 255.0);
}

TEST_F(RasterTest, MissingFileIsIoError) {
  try {
    load_image(dir_ / "nope.png");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
    EXPECT_NE(std::string(e.what()).find("nope.png"), std::string::npos);
  }
}

TEST_F(RasterTest, SixteenBitIsUnsupported) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = 1;
  image.height = 1;
  image.format = PNG_FORMAT_LINEAR_RGB;  // written as 16-bit
  const std::uint16_t px[3] = {0, 1000, 65535};
  ASSERT_TRUE(png_image_write_to_file(&image, (dir_ / "deep.png").c_str(), 0, px, 0, nullptr));
  try {
    load_image(dir_ / "deep.png");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFormat);
    EXPECT_NE(std::string(e.what()).find("deep.png"), std::string::npos);
  }
}

TEST_F(RasterTest, NonPngIsIoError) {
  { std::ofstream(dir_ / "junk.png") << "not a png"; }
  try {
    load_image(dir_ / "junk.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST_F(RasterTest, SaveClampsAndRoundsHalfUp) {
  ImageTensor img(1, 3, 3);
  img(0, 0, 0) = 1.2;
  img(0, 1, 0) = 0.5;
  img(0, 2, 0) = -0.3;
  save_image(img, dir_ / "q.png");
  const auto ref = reference_read_rgb(dir_ / "q.png");
  EXPECT_EQ(ref.rgb[0], 255);
  EXPECT_EQ(ref.rgb[3], 128);
  EXPECT_EQ(ref.rgb[6], 0);
}

TEST(Quantize, ErrorBoundOverEveryByte) {
  // Brute force: every byte's interval of preimages maps back within 1/510.
  for (int byte = 0; byte < 256; ++byte) {
    for (int step = -50; step <= 50; ++step) {
      const double v = std::clamp((byte + step / 100.0) / 255.0, 0.0, 1.0);
      const std::uint8_t q = quantize_sample(v);
      EXPECT_LE(std::abs(q / 255.0 - v), 1.0 / 510.0 + 1e-15) << v;
    }
    EXPECT_EQ(quantize_sample(byte / 255.0), byte);
  }
}

TEST_F(RasterTest, SaveLoadRoundTripIsByteExact) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> bytes(9 * 5 * 3);
  for (auto& b : bytes) b = static_cast<std::uint8_t>(byte(rng));
  reference_write(dir_ / "in.png", 9, 5, PNG_FORMAT_RGB, bytes);
  save_image(load_image(dir_ / "in.png"), dir_ / "out.png");
  const auto ref = reference_read_rgb(dir_ / "out.png");
  EXPECT_EQ(ref.width, 9);
  EXPECT_EQ(ref.height, 5);
  EXPECT_EQ(ref.rgb, bytes);
}

TEST_F(RasterTest, SaveRequiresThreeChannels) {
  EXPECT_THROW(save_image(ImageTensor(2, 2, 1), dir_ / "x.png"), Error);
}

TEST_F(RasterTest, SaveToMissingDirectoryIsIoError) {
  try {
    save_image(ImageTensor(2, 2, 3), dir_ / "no" / "such" / "x.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST_F(RasterTest, MaskThresholdBoundary) {
  reference_write(dir_ / "m.png", 4, 1, PNG_FORMAT_GRAY, {127, 128, 0, 255});
  const BinaryMask m = load_mask(dir_ / "m.png");
  EXPECT_FALSE(m(0, 0));
  EXPECT_TRUE(m(0, 1));
  EXPECT_FALSE(m(0, 2));
  EXPECT_TRUE(m(0, 3));
  const BinaryMask strict = load_mask(dir_ / "m.png", 129);
  EXPECT_FALSE(strict(0, 1));
}

TEST_F(RasterTest, MaskFromRgbUsesRoundedLuma) {
  // Pure green 218: 0.587 * 218 = 127.966 -> 128 (true); 217 -> 127.379 -> 127.
  reference_write(dir_ / "rgb.png", 2, 1, PNG_FORMAT_RGB, {0, 218, 0, 0, 217, 0});
  const BinaryMask m = load_mask(dir_ / "rgb.png");
  EXPECT_TRUE(m(0, 0));
  EXPECT_FALSE(m(0, 1));
}

TEST_F(RasterTest, WhiteAndBlackMasks) {
  reference_write(dir_ / "w.png", 3, 2, PNG_FORMAT_GRAY, std::vector<std::uint8_t>(6, 255));
  reference_write(dir_ / "b.png", 3, 2, PNG_FORMAT_GRAY, std::vector<std::uint8_t>(6, 0));
  EXPECT_EQ(load_mask(dir_ / "w.png").popcount(), 6);
  EXPECT_EQ(load_mask(dir_ / "b.png").popcount(), 0);
}

TEST(BoundingBox, FullMask) {
  const BinaryMask m(4, 7, true);
  EXPECT_EQ(bounding_box(m), (PackingBox{0, 6, 0, 3}));
}

TEST(BoundingBox, SinglePixelAndPair) {
  BinaryMask m(5, 8);
  m(2, 5) = true;
  EXPECT_EQ(bounding_box(m), (PackingBox{5, 5, 2, 2}));
  BinaryMask pair(6, 8);
  pair(1, 1) = true;
  pair(4, 6) = true;
  EXPECT_EQ(bounding_box(pair), (PackingBox{1, 6, 1, 4}));
}

TEST(BoundingBox, EmptyMaskThrows) {
  try {
    bounding_box(BinaryMask(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyMask);
  }
}

TEST(BoundingBox, PropertyTightAndCovering) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Index h = 1 + trial % 17, w = 1 + (trial * 7) % 23;
    const BinaryMask m = testing::random_mask(rng, h, w, static_cast<testing::MaskShape>(trial % 5));
    const PackingBox box = bounding_box(m);
    bool left = false, right = false, top = false, bottom = false;
    for (Index r = 0; r < h; ++r) {
      for (Index c = 0; c < w; ++c) {
        if (!m(r, c)) continue;
        ASSERT_TRUE(c >= box.a && c <= box.b && r >= box.c && r <= box.d);
        left |= c == box.a;
        right |= c == box.b;
        top |= r == box.c;
        bottom |= r == box.d;
      }
    }
    EXPECT_TRUE(left && right && top && bottom);
  }
}

TEST(Crop, IdentityAndSinglePixel) {
  std::mt19937_64 rng(3);
  const ImageTensor img = testing::random_image(rng, 6, 9);
  EXPECT_EQ(crop(img, {0, 8, 0, 5}), img);
  const ImageTensor px = crop(img, {4, 4, 2, 2});
  ASSERT_EQ(px.height(), 1);
  ASSERT_EQ(px.width(), 1);
  for (Index ch = 0; ch < 3; ++ch) EXPECT_EQ(px(0, 0, ch), img(2, 4, ch));
}

TEST(Crop, OutOfBoundsThrows) {
  const ImageTensor img(4, 4, 3);
  EXPECT_THROW(crop(img, {0, 4, 0, 3}), Error);
  EXPECT_THROW(crop(img, {2, 1, 0, 3}), Error);
  EXPECT_THROW(crop(img, {-1, 1, 0, 3}), Error);
}

TEST(Crop, CropOfCropComposes) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> pos(0, 7);
  for (int trial = 0; trial < 100; ++trial) {
    const ImageTensor img = testing::random_image(rng, 8, 8);
    Index a = pos(rng), b = pos(rng), c = pos(rng), d = pos(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const ImageTensor outer = crop(img, {a, b, c, d});
    const Index ia = std::uniform_int_distribution<Index>(0, b - a)(rng);
    const Index ib = std::uniform_int_distribution<Index>(ia, b - a)(rng);
    const Index ic = std::uniform_int_distribution<Index>(0, d - c)(rng);
    const Index id = std::uniform_int_distribution<Index>(ic, d - c)(rng);
    const ImageTensor twice = crop(outer, {ia, ib, ic, id});
    const ImageTensor once = crop(img, {a + ia, a + ib, c + ic, c + id});
    ASSERT_EQ(twice, once);
    // Brute-force check against direct indexing.
    for (Index r = 0; r < once.height(); ++r) {
      for (Index col = 0; col < once.width(); ++col) {
        ASSERT_EQ(once(r, col, 1), img(c + ic + r, a + ia + col, 1));
      }
    }
  }
}

}  // namespace
}  // namespace instyle
