#include <doctest.h>

#include <filesystem>
#include <string>

#include "derec/csv.hpp"
#include "derec/error.hpp"
#include "derec/io.hpp"
#include "derec/pipeline.hpp"

using namespace derec;

namespace {

Schema two_col_schema(const std::string& c1, ColumnKind k1) {
    Schema s;
    s.columns = {{"id", ColumnKind::Identifier}, {c1, k1}};
    s.identifier = "id";
    return s;
}

DataTable from_csv(const std::string& text, const Schema& schema) {
    return table_from_csv_text(text, schema, "fixture");
}

// Straight re-count of constant-within-subject subjects, kept separate
// from the library loop on purpose.
double count_fraction(const DataTable& t, const std::string& col) {
    const Column& c = t.column(col);
    std::size_t constant = 0;
    for (const auto& id : t.subject_order()) {
        bool same = true;
        const auto& rows = t.subject_rows(id);
        for (std::size_t r : rows) {
            if (c.is_text() ? (c.s[r] != c.s[rows[0]]) : (c.d[r] != c.d[rows[0]])) same = false;
        }
        if (same) ++constant;
    }
    return static_cast<double>(constant) / static_cast<double>(t.num_subjects());
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("detect grades fully constant and fully varying columns") {
    auto t = from_csv(
        "id,grp\n"
        "u1,x\nu1,x\nu2,y\nu2,y\nu3,x\n",
        two_col_schema("grp", ColumnKind::Categorical));
    auto report = detect(t, 0.95, "a");
    REQUIRE(report.columns.size() == 1);
    CHECK(report.columns[0].fraction == 1.0);
    CHECK(report.columns[0].contextual);

    auto varying = from_csv(
        "id,grp\n"
        "u1,x\nu1,y\nu2,x\nu2,y\n",
        two_col_schema("grp", ColumnKind::Categorical));
    auto r2 = detect(varying, 0.95, "a");
    CHECK(r2.columns[0].fraction == 0.0);
    CHECK_FALSE(r2.columns[0].contextual);
}

TEST_CASE("detect threshold boundary at 96 of 100 subjects") {
    std::string csv = "id,grp\n";
    for (int i = 0; i < 100; ++i) {
        std::string id = "u" + std::to_string(i);
        if (i < 96) {
            csv += id + ",k\n" + id + ",k\n";
        } else {
            csv += id + ",k\n" + id + ",other\n";
        }
    }
    auto t = from_csv(csv, two_col_schema("grp", ColumnKind::Categorical));
    CHECK(count_fraction(t, "grp") == 0.96);

    auto at95 = detect(t, 0.95, "a");
    CHECK(at95.columns[0].fraction == doctest::Approx(0.96).epsilon(1e-15));
    CHECK(at95.columns[0].contextual);

    auto at97 = detect(t, 0.97, "a");
    CHECK_FALSE(at97.columns[0].contextual);

    auto exactly = detect(t, 0.96, "a");
    CHECK(exactly.columns[0].contextual);
}

TEST_CASE("detect rejects bad thresholds and empty tables") {
    auto t = from_csv("id,grp\nu1,x\n", two_col_schema("grp", ColumnKind::Categorical));
    CHECK_THROWS_AS(detect(t, 0.0, "a"), InputError);
    CHECK_THROWS_AS(detect(t, 1.5, "a"), InputError);
}

TEST_CASE("recreate picks modal representative with first-occurrence ties") {
    Schema sa = two_col_schema("grp", ColumnKind::Categorical);
    auto a = from_csv(
        "id,grp\n"
        "u1,x\nu1,x\nu1,z\n"
        "u2,q\nu2,p\n",
        sa);
    Schema sb = two_col_schema("val", ColumnKind::Numeric);
    auto b = from_csv("id,val\nu1,1\nu2,2\n", sb);

    ContextualReport ra{"a", 0.5, {{"grp", 0.5, true}}};
    ContextualReport rb{"b", 0.5, {{"val", 1.0, true}}};
    auto parent = recreate(a, b, ra, rb);

    CHECK(parent.num_rows() == 2);
    CHECK(parent.schema().columns.size() == 3);
    CHECK(parent.column("grp").s == std::vector<std::string>{"x", "q"});
    CHECK(parent.column("val").d == std::vector<double>{1, 2});
}

TEST_CASE("recreate needs at least one contextual column") {
    auto a = from_csv("id,grp\nu1,x\n", two_col_schema("grp", ColumnKind::Categorical));
    ContextualReport ra{"a", 0.95, {{"grp", 0.0, false}}};
    ContextualReport rb{"b", 0.95, {{"grp", 0.0, false}}};
    CHECK_THROWS_AS(recreate(a, a, ra, rb), NoContextualColumns);
}

TEST_CASE("shared contextual names get source suffixes") {
    auto a = from_csv("id,grp\nu1,ax\nu2,ay\n", two_col_schema("grp", ColumnKind::Categorical));
    auto b = from_csv("id,grp\nu1,bx\nu2,by\n", two_col_schema("grp", ColumnKind::Categorical));
    auto bundle = run_derec(a, b, 0.95);
    CHECK(bundle.children.empty());
    CHECK(bundle.parent.schema().has_column("grp@a"));
    CHECK(bundle.parent.schema().has_column("grp@b"));
    CHECK(bundle.parent.column("grp@a").s == std::vector<std::string>{"ax", "ay"});
    CHECK(bundle.parent.column("grp@b").s == std::vector<std::string>{"bx", "by"});
}

TEST_CASE("run_derec splits a two source fixture") {
    Schema sa;
    sa.columns = {{"id", ColumnKind::Identifier},
                  {"region", ColumnKind::Categorical},
                  {"clicks", ColumnKind::Numeric}};
    sa.identifier = "id";
    auto a = from_csv(
        "id,region,clicks\n"
        "u1,east,3\nu1,east,5\n"
        "u2,west,2\nu2,west,9\nu2,west,4\n"
        "u3,east,7\n",
        sa);
    Schema sb;
    sb.columns = {{"id", ColumnKind::Identifier},
                  {"tier", ColumnKind::Categorical},
                  {"spend", ColumnKind::Numeric}};
    sb.identifier = "id";
    auto b = from_csv(
        "id,tier,spend\n"
        "u1,gold,10\nu1,gold,12\n"
        "u2,silver,5\n"
        "u3,gold,8\nu3,gold,9\n"
        "u4,bronze,1\n",
        sb);

    auto bundle = run_derec(a, b, 0.95);

    CHECK(bundle.parent.num_rows() == 3);
    CHECK(bundle.parent.subject_order() == std::vector<std::string>{"u1", "u2", "u3"});
    CHECK(bundle.parent.schema().has_column("region"));
    CHECK(bundle.parent.schema().has_column("tier"));

    REQUIRE(bundle.children.size() == 2);
    const DataTable* ca = bundle.child("a");
    const DataTable* cb = bundle.child("b");
    REQUIRE(ca != nullptr);
    REQUIRE(cb != nullptr);
    CHECK(ca->num_rows() == 6);
    CHECK(cb->num_rows() == 5);
    CHECK(ca->schema().has_column("clicks"));
    CHECK_FALSE(ca->schema().has_column("region"));

    // applying detect to the parent grades every column 1.0
    for (const auto& cv : detect(bundle.parent, 0.95, "p").columns) {
        CHECK(cv.fraction == 1.0);
    }

    // child value multisets match the source columns
    CHECK(ca->column("clicks").d == std::vector<double>{3, 5, 2, 9, 4, 7});
    CHECK(cb->column("spend").d == std::vector<double>{10, 12, 5, 8, 9});
}

TEST_CASE("parent form input comes back as a childless parent") {
    auto a = from_csv("id,grp\nu1,x\nu2,y\n", two_col_schema("grp", ColumnKind::Categorical));
    auto bundle = run_derec(a, a, 0.95);
    CHECK(bundle.children.empty());
    CHECK(bundle.parent.num_rows() == 2);
    CHECK(bundle.parent.column("grp@a").s == std::vector<std::string>{"x", "y"});
}

TEST_CASE("reassemble restores the intersected sources exactly when noise free") {
    Schema sa;
    sa.columns = {{"id", ColumnKind::Identifier},
                  {"region", ColumnKind::Categorical},
                  {"clicks", ColumnKind::Numeric}};
    sa.identifier = "id";
    auto a = from_csv(
        "id,region,clicks\n"
        "u1,east,3\nu1,east,5\nu2,west,2\nu3,east,7\n",
        sa);
    Schema sb;
    sb.columns = {{"id", ColumnKind::Identifier}, {"spend", ColumnKind::Numeric}};
    sb.identifier = "id";
    auto b = from_csv("id,spend\nu1,10\nu2,5\nu2,6\nu3,8\n", sb);

    auto bundle = run_derec(a, b, 0.95);
    auto [ra, rb] = reassemble(bundle);

    CHECK(table_to_csv_text(ra) == table_to_csv_text(a));
    CHECK(table_to_csv_text(rb) == table_to_csv_text(b));
}

TEST_CASE("reassemble broadcasts parent values onto noisy child rows") {
    Schema sa;
    sa.columns = {{"id", ColumnKind::Identifier},
                  {"grp", ColumnKind::Categorical},
                  {"n", ColumnKind::Numeric}};
    sa.identifier = "id";
    auto a = from_csv(
        "id,grp,n\n"
        "u1,x,1\nu1,x,2\nu1,z,3\nu2,y,4\nu2,y,5\n",
        sa);
    auto b = from_csv("id,val\nu1,1\nu2,2\n", two_col_schema("val", ColumnKind::Numeric));

    auto bundle = run_derec(a, b, 0.5);
    REQUIRE(bundle.child("a") != nullptr);
    auto [ra, rb] = reassemble(bundle);
    CHECK(ra.column("grp").s == std::vector<std::string>{"x", "x", "x", "y", "y"});
    CHECK(ra.column("n").d == std::vector<double>{1, 2, 3, 4, 5});
    CHECK(rb.column("val").d == std::vector<double>{1, 2});
}

TEST_CASE("bundle survives a save and load round trip") {
    namespace fs = std::filesystem;
    Schema sa;
    sa.columns = {{"id", ColumnKind::Identifier},
                  {"region", ColumnKind::Categorical},
                  {"clicks", ColumnKind::Numeric}};
    sa.identifier = "id";
    auto a = from_csv("id,region,clicks\nu1,east,3\nu1,east,5\nu2,west,2\n", sa);
    auto b = from_csv("id,val\nu1,1\nu1,2\nu2,3\n", two_col_schema("val", ColumnKind::Numeric));
    auto bundle = run_derec(a, b, 0.95);

    auto dir = fs::temp_directory_path() / "derec_bundle_test";
    fs::remove_all(dir);
    save_bundle(dir, bundle);
    auto loaded = load_bundle(dir);

    CHECK(table_to_csv_text(loaded.parent) == table_to_csv_text(bundle.parent));
    REQUIRE(loaded.children.size() == bundle.children.size());
    for (std::size_t i = 0; i < loaded.children.size(); ++i) {
        CHECK(loaded.children[i].first == bundle.children[i].first);
        CHECK(table_to_csv_text(loaded.children[i].second) ==
              table_to_csv_text(bundle.children[i].second));
    }
    CHECK(partition_to_json_text(loaded.partition) == partition_to_json_text(bundle.partition));

    // byte-identical re-serialization
    auto digest_before = file_digest(dir / "parent.csv");
    save_bundle(dir, loaded);
    CHECK(file_digest(dir / "parent.csv") == digest_before);

    fs::remove(dir / "child_a.csv");
    CHECK_THROWS_AS(load_bundle(dir), MissingArtifact);
    fs::remove_all(dir);
}

TEST_CASE("partition json carries fractions and verdicts") {
    ContextualReport ra{"a", 0.95, {{"grp", 0.97, true}, {"other", 0.2, false}}};
    ContextualReport rb{"b", 0.95, {{"val", 1.0, true}}};
    auto text = partition_to_json_text({ra, rb});
    auto back = partition_from_json_text(text, "t");
    REQUIRE(back.size() == 2);
    CHECK(back[0].table == "a");
    CHECK(back[0].threshold == 0.95);
    CHECK(back[0].columns[0].fraction == 0.97);
    CHECK(back[0].columns[1].contextual == false);
    CHECK(back[1].columns[0].name == "val");
    CHECK_THROWS_AS(partition_from_json_text("{}", "t"), ParseError);
}

}  // TEST_SUITE("pipeline")
