#include "occsort/mot_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

namespace io = occsort::io;

namespace {

io::ParseResult parse(const std::string& text) {
  std::istringstream in(text);
  return io::parse_detections(in);
}

std::string write(const io::FrameMap& frames) {
  std::ostringstream out;
  io::write_results(out, frames);
  return out.str();
}

TEST(ParseDetections, MapsFieldsToRecord) {
  const auto result = parse("1,-1,10,20,30,40,0.9\n");
  ASSERT_EQ(result.frames.size(), 1u);
  ASSERT_TRUE(result.rejected.empty());
  const auto& rows = result.frames.at(1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].id, -1);
  EXPECT_DOUBLE_EQ(rows[0].box.left, 10.0);
  EXPECT_DOUBLE_EQ(rows[0].box.top, 20.0);
  EXPECT_DOUBLE_EQ(rows[0].box.right, 40.0);
  EXPECT_DOUBLE_EQ(rows[0].box.bottom, 60.0);
  EXPECT_DOUBLE_EQ(rows[0].score, 0.9);
  EXPECT_DOUBLE_EQ(rows[0].world_x, -1.0);
  EXPECT_DOUBLE_EQ(rows[0].world_y, -1.0);
  EXPECT_DOUBLE_EQ(rows[0].world_z, -1.0);
}

TEST(ParseDetections, EmptyInputYieldsNothing) {
  const auto result = parse("");
  EXPECT_TRUE(result.frames.empty());
  EXPECT_TRUE(result.rejected.empty());
}

TEST(ParseDetections, SkipsBlankLinesAndCarriageReturns) {
  const auto result = parse("\n1,-1,0,0,10,10,1\r\n\n  \n2,-1,0,0,10,10,1\n");
  EXPECT_EQ(result.frames.size(), 2u);
  EXPECT_TRUE(result.rejected.empty());
}

TEST(ParseDetections, GroupsRowsByFrame) {
  const auto result = parse(
      "1,-1,0,0,10,10,1\n"
      "2,-1,5,5,10,10,1\n"
      "1,-1,50,50,10,10,1\n");
  ASSERT_EQ(result.frames.size(), 2u);
  EXPECT_EQ(result.frames.at(1).size(), 2u);
  EXPECT_EQ(result.frames.at(2).size(), 1u);
}

TEST(ParseDetections, NonpositiveWidthIsRejectedNotFatal) {
  const auto result = parse(
      "1,-1,0,0,10,10,1\n"
      "2,-1,0,0,-5,10,1\n"
      "3,-1,0,0,10,10,1\n");
  EXPECT_EQ(result.frames.size(), 2u);
  ASSERT_EQ(result.rejected.size(), 1u);
  EXPECT_NE(result.rejected[0].find("line 2"), std::string::npos);
}

TEST(ParseDetections, ZeroHeightIsRejected) {
  const auto result = parse("1,-1,0,0,10,0,1\n");
  EXPECT_TRUE(result.frames.empty());
  ASSERT_EQ(result.rejected.size(), 1u);
}

TEST(ParseDetections, NonpositiveFrameIsRejected) {
  const auto result = parse("0,-1,0,0,10,10,1\n-3,-1,0,0,10,10,1\n");
  EXPECT_TRUE(result.frames.empty());
  EXPECT_EQ(result.rejected.size(), 2u);
}

TEST(ParseDetections, TooFewFieldsThrowsWithLineNumber) {
  try {
    parse("1,-1,0,0,10,10,1\n2,-1,0,0\n");
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseDetections, NonNumericFieldThrowsWithLineNumber) {
  EXPECT_THROW(parse("1,-1,abc,0,10,10,1\n"), std::runtime_error);
  try {
    parse("1,-1,0,0,10,10,1\n1,-1,0,0,10,10,1\nx,-1,0,0,10,10,1\n");
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseDetections, FractionalFrameIsStructural) {
  EXPECT_THROW(parse("1.5,-1,0,0,10,10,1\n"), std::runtime_error);
}

TEST(ParseDetections, WorldColumnsPassThrough) {
  const auto result = parse("4,7,1,2,3,4,0.5,11.5,-2.25,8\n");
  const auto& r = result.frames.at(4)[0];
  EXPECT_EQ(r.id, 7);
  EXPECT_DOUBLE_EQ(r.world_x, 11.5);
  EXPECT_DOUBLE_EQ(r.world_y, -2.25);
  EXPECT_DOUBLE_EQ(r.world_z, 8.0);
}

TEST(ParseDetections, BadWorldColumnThrows) {
  EXPECT_THROW(parse("1,-1,0,0,10,10,1,oops,-1,-1\n"), std::runtime_error);
}

TEST(ParseDetections, MissingFileThrows) {
  EXPECT_THROW(io::parse_detections(std::filesystem::path("/nonexistent/det.txt")),
               std::runtime_error);
}

TEST(ThresholdDetections, KeepsScoresAtOrAboveCutInclusive) {
  io::FrameMap frames;
  frames[1] = {{-1, occsort::BoundingBox::from_ltwh(0, 0, 10, 10), 0.2},
               {-1, occsort::BoundingBox::from_ltwh(20, 0, 10, 10), 0.3},
               {-1, occsort::BoundingBox::from_ltwh(40, 0, 10, 10), 0.9}};

  const auto kept = io::threshold_detections(frames, 0.3);
  ASSERT_EQ(kept.at(1).size(), 2u);
  EXPECT_DOUBLE_EQ(kept.at(1)[0].score, 0.3);
  EXPECT_DOUBLE_EQ(kept.at(1)[1].score, 0.9);

  EXPECT_EQ(io::threshold_detections(frames, 0.0).at(1).size(), 3u);
  EXPECT_TRUE(io::threshold_detections(frames, 1.1).empty());
}

TEST(WriteResults, EmitsFixedPrecisionRow) {
  io::FrameMap frames;
  frames[7] = {{3, occsort::BoundingBox::from_ltwh(0, 0, 10, 10), 1.0}};
  EXPECT_EQ(write(frames), "7,3,0.00,0.00,10.00,10.00,1,-1,-1,-1\n");
}

TEST(WriteResults, EmptyMapWritesNothing) {
  EXPECT_EQ(write({}), "");
}

TEST(WriteResults, RowsSortedByFrameThenId) {
  io::FrameMap frames;
  frames[2] = {{9, occsort::BoundingBox::from_ltwh(0, 0, 1, 1), 1.0},
               {4, occsort::BoundingBox::from_ltwh(2, 0, 1, 1), 1.0}};
  frames[1] = {{5, occsort::BoundingBox::from_ltwh(0, 0, 1, 1), 1.0}};
  EXPECT_EQ(write(frames),
            "1,5,0.00,0.00,1.00,1.00,1,-1,-1,-1\n"
            "2,4,2.00,0.00,1.00,1.00,1,-1,-1,-1\n"
            "2,9,0.00,0.00,1.00,1.00,1,-1,-1,-1\n");
}

TEST(WriteResults, RoundTripsWithinHundredth) {
  io::FrameMap frames;
  frames[1] = {{12, occsort::BoundingBox::from_ltwh(3.14159, 2.71828, 17.5049, 9.999), 1.0}};
  const auto back = parse(write(frames));
  const auto& r = back.frames.at(1)[0];
  EXPECT_EQ(r.id, 12);
  EXPECT_NEAR(r.box.left, 3.14159, 0.01);
  EXPECT_NEAR(r.box.top, 2.71828, 0.01);
  EXPECT_NEAR(r.box.width(), 17.5049, 0.01);
  EXPECT_NEAR(r.box.height(), 9.999, 0.01);
}

TEST(SeqInfo, ParsesSequenceBlock) {
  std::istringstream in(
      "[Sequence]\n"
      "name=MOT17-04\n"
      "imDir=img1\n"
      "frameRate=30\n"
      "seqLength=1050\n"
      "imWidth=1920\n"
      "imHeight=1080\n"
      "imExt=.jpg\n");
  const auto info = io::parse_seqinfo(in);
  EXPECT_EQ(info.name, "MOT17-04");
  EXPECT_EQ(info.seq_length, 1050);
  EXPECT_DOUBLE_EQ(info.frame_rate, 30.0);
  EXPECT_EQ(info.im_width, 1920);
  EXPECT_EQ(info.im_height, 1080);
}

TEST(SeqInfo, IgnoresCommentsAndUnknownKeys) {
  std::istringstream in(
      "; generated\n"
      "# also a comment\n"
      "[Sequence]\n"
      "name = padded \n"
      "seqLength = 5\n"
      "custom=whatever\n");
  const auto info = io::parse_seqinfo(in);
  EXPECT_EQ(info.name, "padded");
  EXPECT_EQ(info.seq_length, 5);
}

TEST(SeqInfo, MissingNameThrows) {
  std::istringstream in("[Sequence]\nseqLength=10\n");
  EXPECT_THROW(io::parse_seqinfo(in), std::runtime_error);
}

TEST(SeqInfo, NonpositiveLengthThrows) {
  std::istringstream in("[Sequence]\nname=x\nseqLength=0\n");
  EXPECT_THROW(io::parse_seqinfo(in), std::runtime_error);
}

TEST(SeqInfo, BadNumericValueThrows) {
  std::istringstream in("[Sequence]\nname=x\nseqLength=ten\n");
  EXPECT_THROW(io::parse_seqinfo(in), std::runtime_error);
}

}  // namespace
