// Copyright 2026 The uacoref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coref/format.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace coref {
namespace {

using json = nlohmann::json;

constexpr const char* kBeginMarker = "#begin document";
constexpr const char* kEndMarker = "#end document";
constexpr const char* kMetaMarker = "#meta";
constexpr int kInterchangeVersion = 1;

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(f);
  return fields;
}

// One "(id", "id)" or "(id)" item of a bracket annotation.
struct BracketItem {
  bool opens = false;
  bool closes = false;
  int id = 0;
};

std::vector<BracketItem> parse_bracket_field(const std::string& field, int line_no) {
  std::vector<BracketItem> items;
  if (field == "-" || field == "_" || field.empty()) return items;
  size_t pos = 0;
  while (pos < field.size()) {
    size_t bar = field.find('|', pos);
    std::string item = field.substr(pos, bar == std::string::npos ? bar : bar - pos);
    pos = bar == std::string::npos ? field.size() : bar + 1;
    if (item.empty()) throw ParseError("empty bracket item in '" + field + "'", line_no);
    BracketItem b;
    size_t lo = 0, hi = item.size();
    if (item.front() == '(') {
      b.opens = true;
      ++lo;
    }
    if (item.back() == ')') {
      b.closes = true;
      --hi;
    }
    if (!b.opens && !b.closes)
      throw ParseError("bracket item without brackets: '" + item + "'", line_no);
    if (lo >= hi) throw ParseError("bracket item without id: '" + item + "'", line_no);
    for (size_t i = lo; i < hi; ++i)
      if (!std::isdigit(static_cast<unsigned char>(item[i])))
        throw ParseError("non-numeric cluster id in '" + item + "'", line_no);
    b.id = std::stoi(item.substr(lo, hi - lo));
    items.push_back(b);
  }
  return items;
}

// Incremental open/close matcher over one bracket column. Identical ids may
// nest; matching is a per-id LIFO stack (CoNLL-2012 convention).
class BracketMatcher {
 public:
  void feed(const std::string& field, int token_index, int line_no) {
    for (const BracketItem& b : parse_bracket_field(field, line_no)) {
      if (b.opens && b.closes) {
        spans_[b.id].push_back({token_index, token_index});
      } else if (b.opens) {
        open_[b.id].push_back({token_index, line_no});
      } else {
        auto it = open_.find(b.id);
        if (it == open_.end() || it->second.empty())
          throw ParseError("close bracket for id " + std::to_string(b.id) + " without open", line_no);
        spans_[b.id].push_back({it->second.back().token, token_index});
        it->second.pop_back();
        if (it->second.empty()) open_.erase(it);
      }
    }
  }

  void finish(const std::string& doc_id, int line_no) const {
    if (!open_.empty())
      throw ParseError("unbalanced mention bracket (id " + std::to_string(open_.begin()->first) +
                           ") in document " + doc_id,
                       line_no);
  }

  // Clusters grouped by annotation id, in ascending id order.
  std::vector<Cluster> clusters() const {
    std::vector<Cluster> out;
    for (const auto& [id, spans] : spans_) out.push_back(spans);
    return out;
  }

  std::vector<Span> all_spans() const {
    std::vector<Span> out;
    for (const auto& [id, spans] : spans_)
      out.insert(out.end(), spans.begin(), spans.end());
    return candidate_order(std::move(out));
  }

  bool saw_annotation() const { return !spans_.empty() || !open_.empty(); }

 private:
  struct Open {
    int token;
    int line;
  };
  std::map<int, std::vector<Open>> open_;
  std::map<int, std::vector<Span>> spans_;
};

struct MetaLine {
  bool present = false;
  bool dialogue = false;
  bool gold = false;
};

MetaLine parse_meta(const std::string& line, int line_no) {
  MetaLine m;
  m.present = true;
  for (const std::string& f : split_ws(line.substr(std::string(kMetaMarker).size()))) {
    size_t eq = f.find('=');
    if (eq == std::string::npos) throw ParseError("malformed #meta field '" + f + "'", line_no);
    std::string key = f.substr(0, eq), val = f.substr(eq + 1);
    bool on = val == "1" || val == "true";
    if (key == "dialogue")
      m.dialogue = on;
    else if (key == "gold")
      m.gold = on;
    else
      throw ParseError("unknown #meta key '" + key + "'", line_no);
  }
  return m;
}

}  // namespace

int ColumnSchema::column_count() const {
  int n = 0;
  for (int c : {col_doc_id, col_token_index, col_token_text, col_speaker, col_coref,
                tag == FormatTag::UA ? col_non_referring : -1})
    n = std::max(n, c + 1);
  return n;
}

ColumnSchema ColumnSchema::ua() { return ColumnSchema{}; }

ColumnSchema ColumnSchema::conll() {
  ColumnSchema s;
  s.tag = FormatTag::CONLL;
  s.col_non_referring = -1;
  s.default_is_dialogue = false;
  return s;
}

ColumnSchema ColumnSchema::for_tag(FormatTag tag) {
  return tag == FormatTag::UA ? ua() : conll();
}

Corpus parse_columns(std::istream& in, const ColumnSchema& schema,
                     const std::string& corpus_name) {
  Corpus corpus;
  corpus.name = corpus_name;
  corpus.format_tag = schema.tag;

  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;

  Document doc;
  bool in_doc = false;
  MetaLine meta;
  BracketMatcher coref_brackets, nonref_brackets;
  int sent_start = 0;
  int expect_sent_index = 0;
  std::optional<std::string> sent_speaker;
  bool sent_open = false;

  auto close_sentence = [&](int at_line) {
    if (!sent_open) return;
    if (doc.num_tokens() == sent_start)
      throw ParseError("empty sentence in document " + doc.doc_id, at_line);
    doc.sentences.push_back({sent_start, doc.num_tokens(), sent_speaker});
    sent_start = doc.num_tokens();
    expect_sent_index = 0;
    sent_speaker.reset();
    sent_open = false;
  };

  auto close_document = [&](int at_line) {
    close_sentence(at_line);
    coref_brackets.finish(doc.doc_id, at_line);
    nonref_brackets.finish(doc.doc_id, at_line);
    bool has_gold = meta.present ? meta.gold
                                 : (coref_brackets.saw_annotation() || schema.tag == FormatTag::UA);
    if (has_gold) {
      ClusterSet cs;
      cs.clusters = coref_brackets.clusters();
      cs.normalize();
      doc.gold_clusters = std::move(cs);
    }
    doc.non_referring = nonref_brackets.all_spans();
    doc.is_dialogue = meta.present ? meta.dialogue : schema.default_is_dialogue;
    if (!seen_ids.insert(doc.doc_id).second)
      throw ParseError("duplicate doc_id: " + doc.doc_id, at_line);
    doc.validate();
    corpus.documents.push_back(std::move(doc));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (line.rfind(kBeginMarker, 0) == 0) {
      if (in_doc) throw ParseError("nested #begin document", line_no);
      in_doc = true;
      doc = Document{};
      meta = MetaLine{};
      coref_brackets = BracketMatcher{};
      nonref_brackets = BracketMatcher{};
      sent_start = 0;
      expect_sent_index = 0;
      sent_open = false;
      sent_speaker.reset();
      std::string rest = line.substr(std::string(kBeginMarker).size());
      size_t first = rest.find_first_not_of(' ');
      doc.doc_id = first == std::string::npos ? "" : rest.substr(first);
      continue;
    }
    if (line.rfind(kEndMarker, 0) == 0) {
      if (!in_doc) throw ParseError("#end document without #begin", line_no);
      close_document(line_no);
      in_doc = false;
      continue;
    }
    if (!in_doc) {
      if (line.empty() || line[0] == '#') continue;
      throw ParseError("token line outside any document", line_no);
    }
    if (line.rfind(kMetaMarker, 0) == 0) {
      meta = parse_meta(line, line_no);
      continue;
    }
    if (line.empty()) {
      close_sentence(line_no);
      continue;
    }
    if (line[0] == '#') continue;  // other comments ignored

    std::vector<std::string> fields = split_ws(line);
    if (static_cast<int>(fields.size()) < schema.column_count())
      throw ParseError("expected at least " + std::to_string(schema.column_count()) +
                           " columns, got " + std::to_string(fields.size()),
                       line_no);

    if (schema.col_token_index >= 0) {
      int idx;
      try {
        idx = std::stoi(fields[schema.col_token_index]);
      } catch (const std::exception&) {
        throw ParseError("non-numeric token index '" + fields[schema.col_token_index] + "'", line_no);
      }
      if (idx != expect_sent_index)
        throw ParseError("token index discontinuity: expected " +
                             std::to_string(expect_sent_index) + ", got " + std::to_string(idx),
                         line_no);
    }
    ++expect_sent_index;

    if (!sent_open && schema.col_speaker >= 0) {
      const std::string& spk = fields[schema.col_speaker];
      if (spk != "-" && spk != "_" && !spk.empty()) sent_speaker = spk;
    }
    sent_open = true;

    int doc_index = doc.num_tokens();
    doc.tokens.push_back({fields[schema.col_token_text], doc_index});
    coref_brackets.feed(fields[schema.col_coref], doc_index, line_no);
    if (schema.tag == FormatTag::UA && schema.col_non_referring >= 0)
      nonref_brackets.feed(fields[schema.col_non_referring], doc_index, line_no);
  }
  if (in_doc) throw ParseError("missing #end document", line_no);
  return corpus;
}

namespace {

// Bracket annotation column for one document: per-token item strings.
std::vector<std::string> render_brackets(int num_tokens, const std::vector<Cluster>& clusters) {
  struct Mark {
    int id;
    Span span;
  };
  std::vector<std::vector<Mark>> opens(num_tokens), closes(num_tokens), singles(num_tokens);
  for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
    // Same-id matching is a LIFO stack: nested spans round-trip, crossing
    // ones cannot, so they are rejected up front.
    for (size_t a = 0; a < clusters[c].size(); ++a)
      for (size_t b = a + 1; b < clusters[c].size(); ++b) {
        const Span x = clusters[c][a], y = clusters[c][b];
        const bool cross = (x.start < y.start && y.start <= x.end && x.end < y.end) ||
                           (y.start < x.start && x.start <= y.end && y.end < x.end);
        if (cross)
          throw Error("cluster contains crossing spans; not representable in bracket annotation");
      }
    for (Span sp : clusters[c]) {
      if (sp.start == sp.end)
        singles[sp.start].push_back({c + 1, sp});
      else {
        opens[sp.start].push_back({c + 1, sp});
        closes[sp.end].push_back({c + 1, sp});
      }
    }
  }
  std::vector<std::string> out(num_tokens);
  for (int t = 0; t < num_tokens; ++t) {
    // Longer spans open first so the per-id stacks nest properly.
    std::sort(opens[t].begin(), opens[t].end(),
              [](const Mark& a, const Mark& b) { return a.span.end != b.span.end ? a.span.end > b.span.end : a.id < b.id; });
    std::sort(closes[t].begin(), closes[t].end(),
              [](const Mark& a, const Mark& b) { return a.span.start != b.span.start ? a.span.start > b.span.start : a.id < b.id; });
    std::sort(singles[t].begin(), singles[t].end(),
              [](const Mark& a, const Mark& b) { return a.id < b.id; });
    std::string s;
    auto add = [&s](const std::string& item) {
      if (!s.empty()) s += '|';
      s += item;
    };
    // Closes come first: a same-id span ending here must pop its own open
    // before a new span with that id opens on this token.
    for (const Mark& m : closes[t]) add(std::to_string(m.id) + ")");
    for (const Mark& m : singles[t]) add("(" + std::to_string(m.id) + ")");
    for (const Mark& m : opens[t]) add("(" + std::to_string(m.id));
    if (s.empty()) s = "-";
    out[t] = s;
  }
  return out;
}

}  // namespace

SerializeStats serialize_columns(const Corpus& corpus, const ColumnSchema& schema,
                                 std::ostream& out) {
  SerializeStats stats;
  for (const Document& doc : corpus.documents) {
    doc.validate();  // also rejects spans crossing document bounds
    out << kBeginMarker << ' ' << doc.doc_id << '\n';
    out << kMetaMarker << " dialogue=" << (doc.is_dialogue ? 1 : 0)
        << " gold=" << (doc.gold_clusters ? 1 : 0) << '\n';

    std::vector<std::string> coref_col = render_brackets(
        doc.num_tokens(), doc.gold_clusters ? doc.gold_clusters->clusters : std::vector<Cluster>{});
    std::vector<std::string> nonref_col;
    if (schema.tag == FormatTag::UA && schema.col_non_referring >= 0) {
      std::vector<Cluster> as_clusters;
      for (Span sp : doc.non_referring) as_clusters.push_back({sp});
      nonref_col = render_brackets(doc.num_tokens(), as_clusters);
    } else {
      stats.dropped_non_referring += static_cast<int>(doc.non_referring.size());
    }

    const int ncols = schema.column_count();
    for (const Sentence& sent : doc.sentences) {
      for (int t = sent.start; t < sent.end; ++t) {
        std::vector<std::string> fields(ncols, "-");
        if (schema.col_doc_id >= 0) fields[schema.col_doc_id] = doc.doc_id;
        if (schema.col_token_index >= 0) fields[schema.col_token_index] = std::to_string(t - sent.start);
        fields[schema.col_token_text] = doc.tokens[t].text;
        if (schema.col_speaker >= 0) fields[schema.col_speaker] = sent.speaker.value_or("-");
        fields[schema.col_coref] = coref_col[t];
        if (!nonref_col.empty()) fields[schema.col_non_referring] = nonref_col[t];
        for (int c = 0; c < ncols; ++c) out << (c ? "\t" : "") << fields[c];
        out << '\n';
      }
      out << '\n';
    }
    out << kEndMarker << '\n';
  }
  return stats;
}

namespace {

json span_to_json(Span s) { return json::array({s.start, s.end}); }

Span span_from_json(const json& j) { return Span{j.at(0).get<int>(), j.at(1).get<int>()}; }

}  // namespace

std::string to_interchange(const Corpus& corpus) {
  json root;
  root["format"] = "uacoref-interchange";
  root["version"] = kInterchangeVersion;
  root["name"] = corpus.name;
  root["format_tag"] = std::string(to_string(corpus.format_tag));
  json docs = json::array();
  for (const Document& doc : corpus.documents) {
    json jd;
    jd["doc_id"] = doc.doc_id;
    jd["is_dialogue"] = doc.is_dialogue;
    json sents = json::array();
    for (const Sentence& s : doc.sentences) {
      json js;
      js["speaker"] = s.speaker ? json(*s.speaker) : json(nullptr);
      json toks = json::array();
      for (int t = s.start; t < s.end; ++t) toks.push_back(doc.tokens[t].text);
      js["tokens"] = std::move(toks);
      sents.push_back(std::move(js));
    }
    jd["sentences"] = std::move(sents);
    if (doc.gold_clusters) {
      json cs = json::array();
      for (const Cluster& c : doc.gold_clusters->clusters) {
        json jc = json::array();
        for (Span sp : c) jc.push_back(span_to_json(sp));
        cs.push_back(std::move(jc));
      }
      jd["gold_clusters"] = std::move(cs);
    } else {
      jd["gold_clusters"] = nullptr;
    }
    json nr = json::array();
    for (Span sp : doc.non_referring) nr.push_back(span_to_json(sp));
    jd["non_referring"] = std::move(nr);
    docs.push_back(std::move(jd));
  }
  root["documents"] = std::move(docs);
  return root.dump(2) + "\n";
}

Corpus from_interchange(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("interchange parse failure: ") + e.what());
  }
  if (!root.contains("format") || root["format"] != "uacoref-interchange")
    throw Error("not a uacoref interchange file");
  if (!root.contains("version") || root["version"].get<int>() != kInterchangeVersion)
    throw Error("interchange schema version mismatch: expected " +
                std::to_string(kInterchangeVersion));
  Corpus corpus;
  corpus.name = root.value("name", "");
  corpus.format_tag = format_tag_from_string(root.value("format_tag", "UA"));
  for (const json& jd : root.at("documents")) {
    Document doc;
    doc.doc_id = jd.at("doc_id").get<std::string>();
    doc.is_dialogue = jd.at("is_dialogue").get<bool>();
    for (const json& js : jd.at("sentences")) {
      Sentence sent;
      sent.start = doc.num_tokens();
      for (const json& jt : js.at("tokens"))
        doc.tokens.push_back({jt.get<std::string>(), doc.num_tokens()});
      sent.end = doc.num_tokens();
      if (!js.at("speaker").is_null()) sent.speaker = js.at("speaker").get<std::string>();
      doc.sentences.push_back(std::move(sent));
    }
    if (!jd.at("gold_clusters").is_null()) {
      ClusterSet cs;
      for (const json& jc : jd.at("gold_clusters")) {
        Cluster c;
        for (const json& jsp : jc) c.push_back(span_from_json(jsp));
        cs.clusters.push_back(std::move(c));
      }
      cs.normalize();
      doc.gold_clusters = std::move(cs);
    }
    for (const json& jsp : jd.at("non_referring")) doc.non_referring.push_back(span_from_json(jsp));
    doc.non_referring = candidate_order(std::move(doc.non_referring));
    doc.validate();
    corpus.documents.push_back(std::move(doc));
  }
  corpus.validate();
  return corpus;
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string resolve_format(const std::string& path, const std::string& format) {
  if (format != "auto") return format;
  if (ends_with(path, ".json")) return "interchange";
  if (ends_with(path, ".conll")) return "conll";
  return "ua";
}

std::string stem_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

Corpus load_corpus(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string fmt = resolve_format(path, format);
  if (fmt == "interchange" || fmt == "json") {
    std::ostringstream buf;
    buf << in.rdbuf();
    Corpus c = from_interchange(buf.str());
    if (c.name.empty()) c.name = stem_of(path);
    return c;
  }
  ColumnSchema schema =
      fmt == "conll" ? ColumnSchema::conll() : ColumnSchema::ua();
  if (fmt != "conll" && fmt != "ua") throw Error("unknown corpus format: " + fmt);
  return parse_columns(in, schema, stem_of(path));
}

SerializeStats save_corpus(const Corpus& corpus, const std::string& path,
                           const std::string& format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  std::string fmt = resolve_format(path, format);
  SerializeStats stats;
  if (fmt == "interchange" || fmt == "json") {
    out << to_interchange(corpus);
  } else if (fmt == "ua" || fmt == "conll") {
    stats = serialize_columns(corpus, ColumnSchema::for_tag(
                                          fmt == "ua" ? FormatTag::UA : FormatTag::CONLL),
                              out);
  } else {
    throw Error("unknown corpus format: " + fmt);
  }
  return stats;
}

}  // namespace coref
