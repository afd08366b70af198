#include <doctest.h>

#include <sstream>

#include "gitscale/commit_record.hpp"
#include "gitscale/errors.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace gitscale;

namespace {

CommitRecord sample() {
    CommitRecord r;
    r.commit_id = "0123456789abcdef0123456789abcdef01234567";
    r.author_email = "dev@example.org";
    r.timestamp = parse_iso8601("2021-03-04T05:06:07Z");
    r.file_edits = {{"src/a.c", false, 12}, {"img/logo.png", true, 0}, {"dir/with, comma\"quote.txt", false, 3}};
    return r;
}

std::size_t schema_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        (void)read_records(in);
    } catch (const SchemaError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("email normalization") {
    CHECK(normalize_email("  Dev@Example.ORG ") == "dev@example.org");
    CHECK(normalize_email("a@b") == "a@b");
}

TEST_CASE("a record serializes to one ordered JSON line") {
    const std::string line = to_json_line(sample());
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.rfind(R"({"commit":"0123456789abcdef0123456789abcdef01234567","author_email":"dev@example.org",)"
                     R"("timestamp":"2021-03-04T05:06:07Z","files":[{"path":"src/a.c","binary":false,"lev":12},)",
                     0) == 0);
}

TEST_CASE("records round-trip through JSON lines") {
    std::vector<CommitRecord> records{sample(), sample()};
    records[1].commit_id = "1123456789abcdef0123456789abcdef01234567";
    records[1].timestamp += std::chrono::seconds(1);
    records[1].file_edits.clear();
    std::ostringstream out;
    write_records(records, out);
    std::istringstream in(out.str());
    CHECK(read_records(in) == records);

    testing_support::TempDir dir;
    persist_records(records, dir / "r.jsonl");
    CHECK(load_records(dir / "r.jsonl") == records);
}

TEST_CASE("totals over file edits") {
    const CommitRecord r = sample();
    CHECK(r.files_modified() == 3);
    CHECK(r.total_distance() == 15);
}

TEST_CASE("ordering by timestamp then commit id") {
    CommitRecord a = sample();
    CommitRecord b = sample();
    b.commit_id = "ff";
    CHECK(record_order(a, b));
    b.timestamp -= std::chrono::seconds(1);
    CHECK(record_order(b, a));
}

TEST_CASE("schema violations name the offending line") {
    const std::string good = to_json_line(sample()) + "\n";
    CHECK(schema_error_line(good + "not json\n") == 2);
    CHECK(schema_error_line(R"({"commit":"x","author_email":"a@b","timestamp":"2021-01-01T00:00:00Z","files":[{"path":"p","binary":false,"lev":-1}]})"
                            "\n") == 1);
    CHECK(schema_error_line(R"({"commit":"x","author_email":"A@B","timestamp":"2021-01-01T00:00:00Z","files":[]})"
                            "\n") == 1);
    CHECK(schema_error_line(R"({"commit":"x","author_email":"a@b","timestamp":"2021-01-01T00:00:00Z","files":[{"path":"p","binary":true,"lev":4}]})"
                            "\n") == 1);
    CHECK(schema_error_line(R"({"commit":"x","author_email":"a@b","files":[]})"
                            "\n") == 1);
    CHECK(schema_error_line(R"({"commit":"x","author_email":"a@b","timestamp":"yesterday","files":[]})"
                            "\n") == 1);
    CHECK(schema_error_line(good + good) == 2);
}

TEST_CASE("blank lines are ignored") {
    std::istringstream in("\n" + to_json_line(sample()) + "\n\n");
    CHECK(read_records(in).size() == 1);
}

TEST_CASE("missing record file") {
    CHECK_THROWS_AS((void)load_records("/nonexistent/records.jsonl"), Error);
}
