#include "rinorm/corpus_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json_schema.hpp"
#include "rinorm/error.hpp"
#include "rinorm/span_parser.hpp"

namespace rinorm {

namespace pt = boost::property_tree;

namespace {

struct XmlSpan {
  std::string id;
  std::string tag;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  const pt::ptree* attrs = nullptr;
};

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      space = false;
      out += c;
    }
  }
  return out;
}

bool span_matches(const std::string& text, std::size_t start, std::size_t end, const std::string& expected) {
  if (start >= end || end > text.size()) return false;
  return collapse_ws(std::string_view(text).substr(start, end - start)) == collapse_ws(expected);
}

[[noreturn]] void fail(const std::string& doc_id, const std::string& element, const std::string& message) {
  throw DataError("document " + doc_id + (element.empty() ? "" : ", element " + element) + ": " + message);
}

std::string attr(const XmlSpan& s, const std::string& doc_id, const char* name) {
  const auto v = s.attrs->get_optional<std::string>(name);
  if (!v) fail(doc_id, s.id.empty() ? s.tag : s.id, std::string("missing attribute ") + name);
  return *v;
}

std::size_t offset_attr(const XmlSpan& s, const std::string& doc_id, const char* name) {
  const std::string v = attr(s, doc_id, name);
  std::size_t pos = 0;
  long long n = -1;
  try {
    n = std::stoll(v, &pos);
  } catch (const std::exception&) {
  }
  if (n < 0 || pos != v.size()) fail(doc_id, s.id, std::string("bad ") + name + " offset \"" + v + "\"");
  return static_cast<std::size_t>(n);
}

// Start of the line holding a "hospital course" heading, or npos.
std::size_t hospital_course_start(const std::string& text) {
  const std::string lower = to_lower(text);
  const std::size_t at = lower.find("hospital course");
  if (at == std::string::npos) return std::string::npos;
  const std::size_t nl = lower.rfind('\n', at);
  return nl == std::string::npos ? 0 : nl + 1;
}

}  // namespace

Document read_i2b2_xml(std::string_view xml, const std::string& doc_id, const RuleTables& rules) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    fail(doc_id, "", std::string("malformed XML: ") + e.what());
  }
  if (tree.size() != 1) fail(doc_id, "", "expected a single root element");
  const pt::ptree& root = tree.begin()->second;

  Document doc;
  doc.id = doc_id;
  const auto text = root.get_child_optional("TEXT");
  if (!text) fail(doc_id, "TEXT", "missing TEXT element");
  doc.text = text->get_value<std::string>();
  for (const auto& [name, child] : *text) {
    if (name == "<xmlcomment>") continue;
    if (name != "<xmlattr>") fail(doc_id, "TEXT", "unexpected child element " + name);
  }

  std::vector<XmlSpan> spans;
  if (const auto tags = root.get_child_optional("TAGS")) {
    for (const auto& [name, child] : *tags) {
      if (name == "<xmlattr>" || name == "<xmlcomment>" || name == "TLINK") continue;
      if (name != "TIMEX3" && name != "EVENT" && name != "SECTIME") fail(doc_id, name, "unsupported tag " + name);
      XmlSpan s;
      s.tag = name;
      const auto attrs = child.get_child_optional("<xmlattr>");
      if (!attrs) fail(doc_id, name, "element without attributes");
      s.attrs = &*attrs;
      s.id = attr(s, doc_id, "id");
      s.start = offset_attr(s, doc_id, "start");
      s.end = offset_attr(s, doc_id, "end");
      s.text = attr(s, doc_id, "text");
      spans.push_back(std::move(s));
    }
  }

  // Offset convention: 0-based if every span matches as given, else 1-based.
  // When neither fits, report the first mismatch under the closer convention.
  const auto matches = [&](const XmlSpan& s, std::size_t k) {
    return s.start >= k && span_matches(doc.text, s.start - k, s.end - k, s.text);
  };
  const auto count = [&](std::size_t k) {
    return std::count_if(spans.begin(), spans.end(), [&](const XmlSpan& s) { return matches(s, k); });
  };
  const auto zero = count(0), one = count(1);
  const std::size_t shift = zero == static_cast<std::ptrdiff_t>(spans.size()) || zero >= one ? 0 : 1;
  for (const auto& s : spans) {
    if (!matches(s, shift)) {
      fail(doc_id, s.id, "text attribute \"" + s.text + "\" does not match the span [" + std::to_string(s.start) +
                             ", " + std::to_string(s.end) + ")");
    }
  }

  const std::size_t course = hospital_course_start(doc.text);
  doc.sections = {Section{SectionKind::ClinicalHistory, 0, course == std::string::npos ? doc.text.size() : course, {}},
                  Section{SectionKind::HospitalCourse, course == std::string::npos ? doc.text.size() : course,
                          doc.text.size(), {}}};
  bool have_admission = false, have_discharge = false;

  for (const auto& s : spans) {
    const std::size_t start = s.start - shift, end = s.end - shift;
    const std::string surface = doc.text.substr(start, end - start);
    if (s.tag == "EVENT") {
      EventMention e;
      e.id = s.id;
      e.start = start;
      e.end = end;
      e.text = surface;
      try {
        e.type = parse_event_type(attr(s, doc_id, "type"));
      } catch (const ParseError& err) {
        fail(doc_id, s.id, err.what());
      }
      doc.events.push_back(std::move(e));
      continue;
    }
    TimexMention m;
    m.id = s.id;
    m.start = start;
    m.end = end;
    m.text = surface;
    if (s.tag == "SECTIME") {
      const auto val = s.attrs->get_optional<std::string>("dvalue");
      const std::string value = val ? *val : attr(s, doc_id, "val");
      try {
        m.value = parse_iso8601(value);
      } catch (const ParseError& err) {
        fail(doc_id, s.id, std::string("SECTIME value: ") + err.what());
      }
      if (!is_full(m.value)) fail(doc_id, s.id, "SECTIME value is not a full date");
      m.type = TimexType::Date;
      m.is_absolute = true;
      const std::string type = attr(s, doc_id, "type");
      Section* section = nullptr;
      if (type == "ADMISSION") {
        if (have_admission) fail(doc_id, s.id, "second ADMISSION SECTIME");
        have_admission = true;
        section = &doc.sections[0];
      } else if (type == "DISCHARGE") {
        if (have_discharge) fail(doc_id, s.id, "second DISCHARGE SECTIME");
        have_discharge = true;
        section = &doc.sections[1];
      } else {
        fail(doc_id, s.id, "SECTIME type must be ADMISSION or DISCHARGE, got " + type);
      }
      m.section = section->kind;
      section->sectime = std::move(m);
      continue;
    }
    try {
      m.type = parse_timex_type(attr(s, doc_id, "type"));
    } catch (const ParseError& err) {
      fail(doc_id, s.id, err.what());
    }
    json::read_value(attr(s, doc_id, "val"), m.value, m.raw_value);
    m.is_absolute = is_date_or_time(m) && is_absolute(surface, rules);
    if (m.is_absolute && !is_full(m.value)) {
      fail(doc_id, s.id, "absolute span \"" + surface + "\" carries no full date value");
    }
    doc.timexes.push_back(std::move(m));
  }
  if (!have_admission) fail(doc_id, "SECTIME", "missing ADMISSION SECTIME");
  if (!have_discharge) fail(doc_id, "SECTIME", "missing DISCHARGE SECTIME");

  finalize(doc);
  validate(doc);
  return doc;
}

void attach_gold(Document& doc, std::string_view companion_json) {
  const json::Json j = json::parse(companion_json, "gold companion for " + doc.id);
  const json::Reader r(j, "");
  r.only_keys({"id", "gold_anchors"});
  const std::string id = r.at("id").string();
  if (id != doc.id) r.at("id").fail("gold companion is for document " + id + ", not " + doc.id);
  doc.gold_anchors = json::gold_from(r.at("gold_anchors"));
  finalize(doc);
  validate(doc);
}

Document read_canonical(std::string_view bytes) {
  const json::Json j = json::parse(bytes, "canonical document");
  const json::Reader r(j, "");
  r.only_keys({"id", "text", "sections", "timexes", "events", "gold_anchors"});
  Document doc;
  doc.id = r.at("id").string();
  doc.text = r.at("text").string();

  const json::Reader sections = r.at("sections");
  for (std::size_t i = 0; i < sections.array_size(); ++i) {
    const json::Reader s = sections.at(i);
    s.only_keys({"kind", "start", "end", "sectime"});
    Section section;
    try {
      section.kind = parse_section_kind(s.at("kind").string());
    } catch (const ParseError& e) {
      s.at("kind").fail(e.what());
    }
    section.start = s.at("start").size_value();
    section.end = s.at("end").size_value();
    section.sectime = json::timex_from(s.at("sectime"), false);
    section.sectime.is_absolute = true;
    section.sectime.section = section.kind;
    if (!is_full(section.sectime.value)) s.at("sectime").at("value").fail("SECTIME value must be a full date");
    doc.sections.push_back(std::move(section));
  }

  const json::Reader timexes = r.at("timexes");
  for (std::size_t i = 0; i < timexes.array_size(); ++i) doc.timexes.push_back(json::timex_from(timexes.at(i), true));

  const json::Reader events = r.at("events");
  for (std::size_t i = 0; i < events.array_size(); ++i) {
    const json::Reader e = events.at(i);
    e.only_keys({"id", "start", "end", "text", "type"});
    EventMention event;
    event.id = e.at("id").string();
    event.start = e.at("start").size_value();
    event.end = e.at("end").size_value();
    event.text = e.at("text").string();
    try {
      event.type = parse_event_type(e.at("type").string());
    } catch (const ParseError& err) {
      e.at("type").fail(err.what());
    }
    doc.events.push_back(std::move(event));
  }

  if (!r.at("gold_anchors").is_null()) doc.gold_anchors = json::gold_from(r.at("gold_anchors"));

  doc.tokens = tokenize(doc.text);
  validate(doc);
  return doc;
}

std::string write_canonical(const Document& doc) {
  json::Json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  j["sections"] = json::Json::array();
  for (const auto& s : doc.sections) {
    json::Json section;
    section["kind"] = to_string(s.kind);
    section["start"] = s.start;
    section["end"] = s.end;
    section["sectime"] = json::to_json(s.sectime, false);
    j["sections"].push_back(std::move(section));
  }
  j["timexes"] = json::Json::array();
  for (const auto& m : doc.timexes) j["timexes"].push_back(json::to_json(m, true));
  j["events"] = json::Json::array();
  for (const auto& e : doc.events) {
    json::Json event;
    event["id"] = e.id;
    event["start"] = e.start;
    event["end"] = e.end;
    event["text"] = e.text;
    event["type"] = to_string(e.type);
    j["events"].push_back(std::move(event));
  }
  j["gold_anchors"] = doc.gold_anchors ? json::to_json(*doc.gold_anchors) : json::Json(nullptr);
  return json::dump(j);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(path.string() + ": cannot write file");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError(path.string() + ": write failed");
}

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError(dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Document> read_corpus(const std::filesystem::path& dir) {
  const auto files = corpus_files(dir);
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    try {
      docs.push_back(read_canonical(read_file(f)));
    } catch (const Error& e) {
      throw DataError(f.string() + ": " + e.what());
    }
  }
  return docs;
}

void write_corpus(const std::vector<Document>& docs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& doc : docs) write_file(dir / (doc.id + ".json"), write_canonical(doc));
}

}  // namespace rinorm
