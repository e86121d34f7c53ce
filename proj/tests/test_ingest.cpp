#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "meedav/ingest/dataset.hpp"
#include "meedav/ingest/segment.hpp"
#include "meedav/ingest/storage.hpp"
#include "meedav/ingest/trial_key.hpp"
#include "meedav/ingest/wav.hpp"
#include "support/memory_backend.hpp"

using namespace meedav;
using namespace meedav::ingest;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::io_error;
}

// Hand-built WAV container, independent of encode_wav.
std::string make_wav(std::uint16_t format, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                     const std::string& payload) {
  std::string out = "RIFF";
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
  };
  auto u16 = [&](std::uint16_t v) {
    out.push_back(static_cast<char>(v));
    out.push_back(static_cast<char>(v >> 8));
  };
  u32(static_cast<std::uint32_t>(36 + payload.size()));
  out += "WAVEfmt ";
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  out += "data";
  u32(static_cast<std::uint32_t>(payload.size()));
  return out + payload;
}

std::string pcm16(std::initializer_list<std::int16_t> values) {
  std::string s;
  for (auto v : values) {
    s.push_back(static_cast<char>(v & 0xFF));
    s.push_back(static_cast<char>((v >> 8) & 0xFF));
  }
  return s;
}

const char* kEeg = "TimeStamp,RAW_TP9,RAW_AF7,RAW_AF8,RAW_TP10\n1000,800.5,810,820,830\n1004,801,811,821,831\n";

}  // namespace

TEST(TrialKey, ParsesPaperExample) {
  auto k = parse_trial_basename("P03_S084_01_Read.eeg");
  EXPECT_EQ(k.participant, "P03");
  EXPECT_EQ(k.stimulus, "S084");
  EXPECT_EQ(k.order, "01");
  EXPECT_EQ(k.task, "Read");
  EXPECT_EQ(k.basename(), "P03_S084_01_Read");
}

TEST(TrialKey, ParsesTranslateWav) {
  auto k = parse_trial_basename("P12_S001_02_Translate.wav");
  EXPECT_EQ((TrialKey{"P12", "S001", "02", "Translate"}), k);
}

TEST(TrialKey, RejectsMalformed) {
  for (const char* bad : {"notes.txt", "", "P03_S084_01", "X03_S084_01_Read.eeg", "P03_T084_01_Read.eeg",
                          "P03_S084_ab_Read.eeg", "P_S084_01_Read.eeg", "P03_S084_01_Read_x.eeg"}) {
    EXPECT_EQ(code_of([&] { parse_trial_basename(bad); }), ErrorCode::malformed_basename) << bad;
  }
}

TEST(TrialKey, RoundTripRandomized) {
  std::mt19937 rng(7);
  auto digits = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng() % 10));
    return s;
  };
  const std::string alnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-";
  for (int i = 0; i < 500; ++i) {
    TrialKey k{"P" + digits(1 + rng() % 4), "S" + digits(1 + rng() % 4), digits(1 + rng() % 3), ""};
    for (int j = 0, n = 1 + static_cast<int>(rng() % 10); j < n; ++j) k.task.push_back(alnum[rng() % alnum.size()]);
    EXPECT_EQ(parse_trial_basename(k.basename() + ".eeg"), k);
    EXPECT_EQ(parse_trial_basename(k.basename()).basename(), k.basename());
  }
}

TEST(LoadEeg, MuseHeader) {
  auto rec = load_eeg(kEeg);
  ASSERT_EQ(rec.channels.size(), 4u);
  EXPECT_EQ(rec.channels[0].name, "RAW_TP9");
  EXPECT_EQ(rec.channels[3].name, "RAW_TP10");
  EXPECT_EQ(rec.size(), 2u);
  EXPECT_DOUBLE_EQ(rec.channels[0].samples[0], 800.5);
  EXPECT_DOUBLE_EQ(rec.timestamps[1], 1004.0);
}

TEST(LoadEeg, ChannelAgnosticAndIgnoresOtherColumns) {
  std::string text = "TimeStamp,Delta_TP9";
  for (int c = 0; c < 8; ++c) text += ",RAW_C" + std::to_string(c);
  text += "\n0,0.1,1,2,3,4,5,6,7,8\n";
  auto rec = load_eeg(text);
  ASSERT_EQ(rec.channels.size(), 8u);
  EXPECT_EQ(rec.channels[7].name, "RAW_C7");
  EXPECT_DOUBLE_EQ(rec.channels[7].samples[0], 8.0);
}

TEST(LoadEeg, TabDelimitedAndCrLf) {
  auto rec = load_eeg("TimeStamp\tRAW_A\tRAW_B\r\n1\t2\t3\r\n2\t4\t5\r\n");
  ASSERT_EQ(rec.channels.size(), 2u);
  EXPECT_DOUBLE_EQ(rec.channels[1].samples[1], 5.0);
}

TEST(LoadEeg, NonNumericNamesRowAndColumn) {
  try {
    load_eeg("TimeStamp,RAW_TP9\n1,2\n2,abc\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("RAW_TP9"), std::string::npos) << e.what();
  }
}

TEST(LoadEeg, Errors) {
  EXPECT_EQ(code_of([] { load_eeg("Time,RAW_A\n1,2\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { load_eeg("TimeStamp,RAW_A\n1,2,3\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { load_eeg("TimeStamp,RAW_A\n"); }), ErrorCode::empty_record);
  EXPECT_EQ(code_of([] { load_eeg("TimeStamp,Other\n1,2\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { load_eeg("TimeStamp,RAW_A\n2,2\n1,2\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { load_eeg("TimeStamp,RAW_A\n1,nan\n"); }), ErrorCode::parse_error);
}

TEST(LoadGaze, EventNormalization) {
  auto rec = load_gaze("TimeStamp,X,Y,Event\n1000,640.0,512.0,FIXATION\n1004,650.0,512.0,\n1008,655.0,512.0,BLINK_START\n"
                       "1012,655,512,Saccade\n");
  ASSERT_EQ(rec.size(), 4u);
  ASSERT_TRUE(rec.events[0]);
  EXPECT_EQ(rec.events[0]->kind, EventKind::fixation);
  EXPECT_FALSE(rec.events[1]);
  ASSERT_TRUE(rec.events[2]);
  EXPECT_EQ(rec.events[2]->kind, EventKind::other);
  EXPECT_EQ(rec.events[2]->label, "BLINK_START");
  EXPECT_EQ(rec.events[3]->kind, EventKind::saccade);
  EXPECT_DOUBLE_EQ(rec.x[1], 650.0);
}

TEST(LoadGaze, EventColumnOptional) {
  auto rec = load_gaze("TimeStamp,X,Y\n1,2,3\n");
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_FALSE(rec.events[0]);
  EXPECT_EQ(code_of([] { load_gaze("TimeStamp,X\n1,2\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { load_gaze("TimeStamp,X,Y\n"); }), ErrorCode::empty_record);
}

TEST(LoadAudio, SixteenKhzMono) {
  std::string payload(16000 * 2, '\0');
  auto rec = load_audio(make_wav(1, 1, 16000, 16, payload));
  EXPECT_DOUBLE_EQ(rec.sample_rate, 16000.0);
  EXPECT_EQ(rec.samples.size(), 16000u);
}

TEST(LoadAudio, StereoAveragesToMono) {
  // float32 stereo frames of [0.5, -0.5]
  std::string payload;
  for (int f = 0; f < 10; ++f) {
    for (float v : {0.5f, -0.5f}) {
      std::uint32_t raw;
      std::memcpy(&raw, &v, 4);
      for (int i = 0; i < 4; ++i) payload.push_back(static_cast<char>(raw >> (8 * i)));
    }
  }
  auto rec = load_audio(make_wav(3, 2, 8000, 32, payload));
  ASSERT_EQ(rec.samples.size(), 10u);
  for (double s : rec.samples) EXPECT_EQ(s, 0.0);
}

TEST(LoadAudio, IntegerScaling) {
  auto rec = load_audio(make_wav(1, 1, 8000, 16, pcm16({-32768, 32767, 0, 16384})));
  EXPECT_EQ(rec.samples[0], -1.0);
  EXPECT_DOUBLE_EQ(rec.samples[1], 32767.0 / 32768.0);
  EXPECT_EQ(rec.samples[3], 0.5);

  auto u8 = load_audio(make_wav(1, 1, 8000, 8, std::string{'\x00', '\x80', '\xFF'}));
  EXPECT_EQ(u8.samples[0], -1.0);
  EXPECT_EQ(u8.samples[1], 0.0);

  auto s24 = load_audio(make_wav(1, 1, 8000, 24, std::string{'\x00', '\x00', '\x80'}));
  EXPECT_EQ(s24.samples[0], -1.0);

  auto s32 = load_audio(make_wav(1, 1, 8000, 32, std::string{'\x00', '\x00', '\x00', '\x80'}));
  EXPECT_EQ(s32.samples[0], -1.0);
}

TEST(LoadAudio, Errors) {
  EXPECT_EQ(code_of([] { load_audio(make_wav(2, 1, 8000, 4, std::string(4, '\0'))); }), ErrorCode::unsupported_format);
  auto truncated = make_wav(1, 1, 8000, 16, pcm16({1, 2, 3, 4}));
  truncated.resize(truncated.size() - 3);
  EXPECT_EQ(code_of([&] { load_audio(truncated); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { load_audio("not a wav file at all"); }), ErrorCode::parse_error);
}

TEST(LoadAudio, PropertyFrameCountAndRange) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng() % 2000;
    AudioRecord a{static_cast<double>(8000 + rng() % 40000), {}};
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (std::size_t i = 0; i < n; ++i) a.samples.push_back(u(rng));
    for (auto enc : {WavEncoding::pcm16, WavEncoding::float32}) {
      auto back = load_audio(encode_wav(a, enc));
      ASSERT_EQ(back.samples.size(), n);
      for (double s : back.samples) ASSERT_TRUE(s >= -1.0 && s <= 1.0);
    }
  }
}

TEST(Discovery, CompleteTrial) {
  test_support::MemoryBackend b({{"P03_S084_01_Read.eeg", kEeg}, {"P03_S084_01_Read.et", ""}, {"P03_S084_01_Read.wav", ""}});
  auto d = discover_trials(b);
  ASSERT_EQ(d.trials.size(), 1u);
  EXPECT_TRUE(d.trials[0].gaze_path);
  EXPECT_TRUE(d.trials[0].audio_path);
  EXPECT_TRUE(d.warnings.empty());
}

TEST(Discovery, GazeOnlyIsExcludedWithWarning) {
  test_support::MemoryBackend b(std::map<std::string, std::string>{{"P03_S084_01_Read.et", ""}});
  auto d = discover_trials(b);
  EXPECT_TRUE(d.trials.empty());
  EXPECT_EQ(d.warnings.size(), 1u);
}

TEST(Discovery, TwoTrialsAndAStrayFile) {
  test_support::MemoryBackend b({{"P12_S001_02_Translate.eeg", ""},
                            {"P03_S084_01_Read.eeg", ""},
                            {"P03_S084_01_Read.wav", ""},
                            {"notes.txt", ""}});
  auto d = discover_trials(b);
  ASSERT_EQ(d.trials.size(), 2u);
  EXPECT_EQ(d.warnings.size(), 1u);
  EXPECT_EQ(d.trials[0].key.participant, "P03");
  EXPECT_FALSE(d.trials[0].gaze_path);
  EXPECT_EQ(d.trials[1].key.basename(), "P12_S001_02_Translate");
}

TEST(Discovery, SortsNumerically) {
  test_support::MemoryBackend b({{"P10_S001_01_Read.eeg", ""}, {"P9_S001_01_Read.eeg", ""}, {"P9_S20_01_Read.eeg", ""},
                            {"P9_S3_01_Read.eeg", ""}});
  auto d = discover_trials(b);
  ASSERT_EQ(d.trials.size(), 4u);
  EXPECT_EQ(d.trials[0].key.basename(), "P9_S001_01_Read");
  EXPECT_EQ(d.trials[1].key.basename(), "P9_S3_01_Read");
  EXPECT_EQ(d.trials[2].key.basename(), "P9_S20_01_Read");
  EXPECT_EQ(d.trials[3].key.basename(), "P10_S001_01_Read");
}

TEST(Discovery, DeterministicUnderListingPermutation) {
  std::vector<std::string> files{"a/P01_S001_01_Read.eeg", "b/P01_S001_01_Read.eeg", "P02_S002_01_Read.et",
                                 "P02_S002_01_Read.eeg",  "junk.bin",              "P1_S1_1_Read.wav",
                                 "P03_S084_01_Read.clean.eeg"};
  test_support::MemoryBackend b;
  for (const auto& f : files) b.put(f, "");
  b.set_listing(files);
  const auto reference = discover_trials(b);
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(files.begin(), files.end(), rng);
    b.set_listing(files);
    auto d = discover_trials(b);
    ASSERT_EQ(d.trials.size(), reference.trials.size());
    for (std::size_t t = 0; t < d.trials.size(); ++t) {
      EXPECT_EQ(d.trials[t].eeg_path, reference.trials[t].eeg_path);
      EXPECT_EQ(d.trials[t].gaze_path, reference.trials[t].gaze_path);
    }
    EXPECT_EQ(d.warnings, reference.warnings);
  }
}

TEST(Discovery, ManifestSuffixesAndLayout) {
  test_support::MemoryBackend b({{"meedav.manifest", "timestamp_unit=s\neeg_suffix=.csv\ngaze_suffix=.gaze.csv\n"
                                                "layout=data/{modality}/*\n"},
                            {"data/eeg/P01_S001_01_Read.csv", ""},
                            {"data/et/P01_S001_01_Read.gaze.csv", ""},
                            {"data/audio/P01_S001_01_Read.wav", ""},
                            {"README.md", ""},
                            {"data/eeg/P01_S001_01_Read.gaze.csv", ""}});
  auto d = discover_trials(b);
  EXPECT_EQ(d.manifest.timestamp_unit, TimeUnit::seconds);
  ASSERT_EQ(d.trials.size(), 1u);
  EXPECT_EQ(d.trials[0].eeg_path, "data/eeg/P01_S001_01_Read.csv");
  EXPECT_EQ(*d.trials[0].gaze_path, "data/et/P01_S001_01_Read.gaze.csv");
  EXPECT_EQ(*d.trials[0].audio_path, "data/audio/P01_S001_01_Read.wav");
  // README is outside the layout and silently ignored; the misplaced gaze
  // file sits in the eeg directory and is not a valid EEG basename
  EXPECT_EQ(d.warnings.size(), 1u);
}

TEST(Discovery, ManifestErrors) {
  EXPECT_EQ(code_of([] { parse_manifest("colour=blue\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_manifest("timestamp_unit=us\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_manifest("layout=data/*\n"); }), ErrorCode::parse_error);
  auto m = parse_manifest("# comment\n\ntimestamp_unit = ms\n");
  EXPECT_EQ(parse_manifest(m.serialize()).serialize(), m.serialize());
}

TEST(Glob, Basics) {
  EXPECT_TRUE(glob_match("data/*/x.eeg", "data/eeg/x.eeg"));
  EXPECT_FALSE(glob_match("data/*", "data/eeg/x.eeg"));
  EXPECT_TRUE(glob_match("**/*.eeg", "a/b/c.eeg"));
  EXPECT_TRUE(glob_match("**/*.eeg", "c.eeg"));
  EXPECT_TRUE(glob_match("p?/x", "p1/x"));
  EXPECT_FALSE(glob_match("p?/x", "p/x"));
}

TEST(LocalBackend, ListsAndReadsBytes) {
  namespace fs = std::filesystem;
  auto root = fs::temp_directory_path() / "meedav_local_backend_test";
  fs::remove_all(root);
  fs::create_directories(root / "sub");
  std::ofstream(root / "sub" / "P01_S001_01_Read.eeg", std::ios::binary) << kEeg;
  std::ofstream(root / "top.bin", std::ios::binary) << std::string("a\0b", 3);
  LocalBackend b(root);
  auto files = b.list_files();
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0], "sub/P01_S001_01_Read.eeg");
  EXPECT_EQ(b.read("top.bin"), std::string("a\0b", 3));
  EXPECT_EQ(code_of([&] { b.read("missing"); }), ErrorCode::not_found);
  EXPECT_EQ(code_of([&] { LocalBackend(root / "nope").list_files(); }), ErrorCode::backend_unavailable);
  fs::remove_all(root);
}

TEST(Segment, TwoSecondChunkAtSixteenKhz) {
  AudioRecord raw{16000.0, std::vector<double>(160000)};
  for (std::size_t i = 0; i < raw.samples.size(); ++i) raw.samples[i] = static_cast<double>(i) / 160000.0;
  auto key = parse_trial_basename("P01_S001_01_Read");
  auto out = segment_raw_audio(raw, {{key, 2.0, 4.0}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].first, key);
  EXPECT_EQ(out[0].second.samples.size(), 32000u);
  EXPECT_EQ(out[0].second.samples.front(), raw.samples[32000]);
  EXPECT_EQ(out[0].second.samples.back(), raw.samples[63999]);
}

TEST(Segment, WholeStreamAndResampling) {
  AudioRecord raw{8000.0, std::vector<double>(8000)};
  for (std::size_t i = 0; i < raw.samples.size(); ++i) raw.samples[i] = static_cast<double>(i);
  auto key = parse_trial_basename("P01_S001_01_Read");
  auto out = segment_raw_audio(raw, {{key, 0.0, raw.duration_s()}});
  ASSERT_EQ(out[0].second.samples.size(), 16000u);
  EXPECT_DOUBLE_EQ(out[0].second.samples[1], 0.5);  // halfway between source samples 0 and 1
  EXPECT_DOUBLE_EQ(out[0].second.samples[2], 1.0);
}

TEST(Segment, Errors) {
  AudioRecord raw{16000.0, std::vector<double>(160000)};
  auto key = parse_trial_basename("P01_S001_01_Read");
  EXPECT_EQ(code_of([&] { segment_raw_audio(raw, {{key, 5.0, 3.0}}); }), ErrorCode::boundary_out_of_range);
  EXPECT_EQ(code_of([&] { segment_raw_audio(raw, {{key, -1.0, 3.0}}); }), ErrorCode::boundary_out_of_range);
  EXPECT_EQ(code_of([&] { segment_raw_audio(raw, {{key, 1.0, 10.5}}); }), ErrorCode::boundary_out_of_range);
}

TEST(Segment, BoundaryFile) {
  auto b = parse_boundaries("basename,start_s,end_s\nP01_S001_01_Read,0.5,2.25\n");
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].key.basename(), "P01_S001_01_Read");
  EXPECT_EQ(b[0].end_s, 2.25);
  EXPECT_EQ(code_of([] { parse_boundaries("name,start_s,end_s\nx,1,2\n"); }), ErrorCode::parse_error);
}
