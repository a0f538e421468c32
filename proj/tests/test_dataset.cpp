#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mapper/dataset.hpp"

using namespace mapper;
using testutil::TempDir;

TEST_CASE("binary embeddings round-trip") {
  TempDir tmp;
  Matrix X(3, 2);
  X << 1.0, 2.0, 3.0, 4.0, -0.5, 0.25;
  const auto ids = testutil::make_ids("row", 3);
  const auto path = tmp.path / "emb.bin";
  testutil::write_binary_embeddings(path, X, ids);

  const EmbeddingMatrix loaded = load_embeddings(path, EmbeddingFormat::Binary);
  REQUIRE(loaded.values.rows() == 3);
  REQUIRE(loaded.values.cols() == 2);
  CHECK(loaded.ids == ids);
  CHECK(loaded.values(2, 1) == doctest::Approx(0.25));
}

TEST_CASE("binary loader rejects malformed files") {
  TempDir tmp;
  const auto path = tmp.path / "emb.bin";

  SUBCASE("bad magic") {
    testutil::write_text(path, "XXXX\x01\x00\x00\x00\x01\x00\x00\x00");
    CHECK_THROWS_AS(load_embeddings(path, EmbeddingFormat::Binary), ValidationError);
  }
  SUBCASE("declared n = 0") {
    std::string bytes = "MPE1";
    const std::uint32_t n = 0, d = 2;
    bytes.append(reinterpret_cast<const char*>(&n), 4);
    bytes.append(reinterpret_cast<const char*>(&d), 4);
    testutil::write_text(path, bytes);
    CHECK_THROWS_WITH_AS(load_embeddings(path, EmbeddingFormat::Binary),
                         doctest::Contains("empty matrix"), ValidationError);
  }
  SUBCASE("truncated payload") {
    Matrix X(2, 2);
    X << 1, 2, 3, 4;
    testutil::write_binary_embeddings(path, X, testutil::make_ids("r", 2));
    std::string bytes = testutil::read_text(path);
    bytes.resize(bytes.size() / 2);
    testutil::write_text(path, bytes);
    CHECK_THROWS_AS(load_embeddings(path, EmbeddingFormat::Binary), ValidationError);
  }
  SUBCASE("trailing bytes") {
    Matrix X(2, 2);
    X << 1, 2, 3, 4;
    testutil::write_binary_embeddings(path, X, testutil::make_ids("r", 2));
    std::string bytes = testutil::read_text(path) + "junk";
    testutil::write_text(path, bytes);
    CHECK_THROWS_AS(load_embeddings(path, EmbeddingFormat::Binary), ValidationError);
  }
  SUBCASE("non-finite value names the row") {
    Matrix X(2, 2);
    X << 1, 2, 3, 4;
    X(1, 0) = std::numeric_limits<double>::quiet_NaN();
    testutil::write_binary_embeddings(path, X, testutil::make_ids("r", 2));
    CHECK_THROWS_WITH_AS(load_embeddings(path, EmbeddingFormat::Binary),
                         doctest::Contains("row 1"), ValidationError);
  }
  SUBCASE("duplicate ids") {
    Matrix X(2, 2);
    X << 1, 2, 3, 4;
    testutil::write_binary_embeddings(path, X, {"same", "same"});
    CHECK_THROWS_AS(load_embeddings(path, EmbeddingFormat::Binary), ValidationError);
  }
}

TEST_CASE("csv embeddings load and validate") {
  TempDir tmp;
  const auto path = tmp.path / "emb.csv";

  SUBCASE("3x2 file") {
    testutil::write_text(path, "id,e0,e1\na,1.0,2.0\nb,3.0,4.0\nc,5.0,6.0\n");
    const EmbeddingMatrix m = load_embeddings(path, EmbeddingFormat::Csv);
    CHECK(m.values.rows() == 3);
    CHECK(m.values.cols() == 2);
    CHECK(m.ids == std::vector<std::string>{"a", "b", "c"});
    CHECK(m.values(1, 0) == doctest::Approx(3.0));
  }
  SUBCASE("bad header") {
    testutil::write_text(path, "id,x0,x1\na,1,2\n");
    CHECK_THROWS_AS(load_embeddings(path, EmbeddingFormat::Csv), ValidationError);
  }
  SUBCASE("row width mismatch") {
    testutil::write_text(path, "id,e0,e1\na,1.0\n");
    CHECK_THROWS_WITH_AS(load_embeddings(path, EmbeddingFormat::Csv), doctest::Contains("a"),
                         ValidationError);
  }
  SUBCASE("NaN rejected with row name") {
    testutil::write_text(path, "id,e0\na,1.0\nb,nan\n");
    CHECK_THROWS_AS(load_embeddings(path, EmbeddingFormat::Csv), ValidationError);
  }
}

TEST_CASE("label csv parsing") {
  TempDir tmp;
  const auto path = tmp.path / "labels.csv";

  SUBCASE("gold only") {
    testutil::write_text(path, "id,gold\na,1\nb,0\n");
    const auto records = load_labels(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].gold == 1);
    CHECK_FALSE(records[0].pred.has_value());
    CHECK_FALSE(records[0].agreement.has_value());
  }
  SUBCASE("full columns") {
    testutil::write_text(path, "id,gold,pred,agreement\na,1,0,A0\nb,0,1,A++\nc,1,,A+\n");
    const auto records = load_labels(path);
    REQUIRE(records.size() == 3);
    CHECK(*records[0].pred == 0);
    CHECK(*records[0].agreement == Agreement::A0);
    CHECK(*records[1].agreement == Agreement::APlusPlus);
    CHECK_FALSE(records[2].pred.has_value());  // empty cell stays absent
    CHECK(*records[2].agreement == Agreement::APlus);
  }
  SUBCASE("gold outside {0,1}") {
    testutil::write_text(path, "id,gold\na,2\n");
    CHECK_THROWS_AS(load_labels(path), ValidationError);
  }
  SUBCASE("duplicate id named") {
    testutil::write_text(path, "id,gold\na,1\na,0\n");
    CHECK_THROWS_WITH_AS(load_labels(path), doctest::Contains("a"), ValidationError);
  }
  SUBCASE("missing required column") {
    testutil::write_text(path, "id,pred\na,1\n");
    CHECK_THROWS_AS(load_labels(path), ValidationError);
  }
  SUBCASE("unknown agreement token") {
    testutil::write_text(path, "id,gold,agreement\na,1,A+++\n");
    CHECK_THROWS_AS(load_labels(path), ValidationError);
  }
}

TEST_CASE("join is strict both ways and order-insensitive") {
  Matrix X(3, 1);
  X << 1, 2, 3;
  EmbeddingMatrix emb{X, {"a", "b", "c"}};

  SUBCASE("matching labels in permuted order") {
    std::vector<LabelRecord> labels = {{"c", 1, {}, {}}, {"a", 0, {}, {}}, {"b", 1, {}, {}}};
    const EmbeddingDataset ds = join(emb, labels);
    REQUIRE(ds.size() == 3);
    CHECK(ds.label(0).id == "a");
    CHECK(ds.label(0).gold == 0);
    CHECK(ds.label(2).id == "c");
    CHECK(ds.label(2).gold == 1);
  }
  SUBCASE("missing label reported with id") {
    std::vector<LabelRecord> labels = {{"a", 0, {}, {}}, {"b", 1, {}, {}}};
    CHECK_THROWS_WITH_AS(join(emb, labels), doctest::Contains("c"), ValidationError);
  }
  SUBCASE("surplus label reported with id") {
    std::vector<LabelRecord> labels = {
        {"a", 0, {}, {}}, {"b", 1, {}, {}}, {"c", 0, {}, {}}, {"zzz", 0, {}, {}}};
    CHECK_THROWS_WITH_AS(join(emb, labels), doctest::Contains("zzz"), ValidationError);
  }
}

TEST_CASE("agreement filtering") {
  Matrix X(4, 1);
  X << 1, 2, 3, 4;
  std::vector<LabelRecord> labels = {{"a", 0, {}, Agreement::A0},
                                     {"b", 1, {}, Agreement::A0},
                                     {"c", 1, {}, Agreement::APlusPlus},
                                     {"d", 0, {}, Agreement::APlus}};
  const EmbeddingDataset ds(X, labels);

  SUBCASE("keeps matching rows in order") {
    const EmbeddingDataset a0 = filter_by_agreement(ds, Agreement::A0);
    REQUIRE(a0.size() == 2);
    CHECK(a0.label(0).id == "a");
    CHECK(a0.label(1).id == "b");
    CHECK(a0.embeddings()(1, 0) == doctest::Approx(2.0));
  }
  SUBCASE("tier sizes partition the dataset") {
    const auto n = filter_by_agreement(ds, Agreement::A0).size() +
                   filter_by_agreement(ds, Agreement::APlus).size() +
                   filter_by_agreement(ds, Agreement::APlusPlus).size();
    CHECK(n == ds.size());
  }
  SUBCASE("empty result allowed") {
    std::vector<LabelRecord> one = {{"a", 0, {}, Agreement::A0}};
    Matrix X1(1, 1);
    X1 << 1;
    const EmbeddingDataset small(X1, one);
    CHECK(filter_by_agreement(small, Agreement::APlus).size() == 0);
  }
  SUBCASE("error when no tags at all") {
    std::vector<LabelRecord> untagged = {{"a", 0, {}, {}}};
    Matrix X1(1, 1);
    X1 << 1;
    const EmbeddingDataset plain(X1, untagged);
    CHECK_THROWS_AS(filter_by_agreement(plain, Agreement::A0), ValidationError);
  }
}

TEST_CASE("dataset channel detection") {
  Matrix X(2, 1);
  X << 1, 2;
  SUBCASE("has_pred requires every record") {
    std::vector<LabelRecord> labels = {{"a", 0, 1, {}}, {"b", 1, {}, {}}};
    CHECK_FALSE(EmbeddingDataset(X, labels).has_pred());
    labels[1].pred = 0;
    CHECK(EmbeddingDataset(X, labels).has_pred());
  }
  SUBCASE("has_agreement needs at least one tag") {
    std::vector<LabelRecord> labels = {{"a", 0, {}, {}}, {"b", 1, {}, {}}};
    CHECK_FALSE(EmbeddingDataset(X, labels).has_agreement());
    labels[0].agreement = Agreement::APlus;
    CHECK(EmbeddingDataset(X, labels).has_agreement());
  }
}
