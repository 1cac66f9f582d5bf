/*
 * Copyright (C) 2026 The EmbodiKit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ekit/scene/payload.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ekit::scene {

namespace {

const std::vector<std::pair<PayloadKind, std::string>>& kind_table() {
  static const std::vector<std::pair<PayloadKind, std::string>> table = {
      {PayloadKind::Points, "points"},     {PayloadKind::Box, "box"},
      {PayloadKind::Trajectory, "trajectory"}, {PayloadKind::Option, "option"},
      {PayloadKind::FreeText, "free_text"},    {PayloadKind::Workflow, "workflow"},
  };
  return table;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Lenient scanner over answer strings: skips whitespace freely, understands
/// both "..." and the U+2026 ellipsis the examples use for truncated lists.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept_ellipsis() {
    skip_ws();
    if (text_.compare(pos_, 3, "\xe2\x80\xa6") == 0) {  // U+2026
      pos_ += 3;
      return true;
    }
    if (text_.compare(pos_, 3, "...") == 0) {
      pos_ += 3;
      return true;
    }
    return false;
  }

  std::optional<double> number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr == begin) return std::nullopt;
    pos_ += static_cast<std::size_t>(result.ptr - begin);
    return value;
  }

  std::size_t position() const { return pos_; }
  std::string_view rest() const { return text_.substr(pos_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

PayloadParseResult parse_error(const std::string& reason) { return {std::nullopt, reason}; }

/// Parses "[(x, y), (x, y), ...]" or "[[x, y], [x, y], ...]", tolerating a
/// trailing ellipsis and a trailing period after the closing bracket.
std::optional<std::vector<PixelPoint>> parse_point_list(Scanner& scan, std::string& error) {
  if (!scan.accept('[')) {
    error = "expected '['";
    return std::nullopt;
  }
  std::vector<PixelPoint> points;
  while (true) {
    if (scan.accept(']')) break;
    if (scan.accept_ellipsis()) {
      if (!scan.accept(']')) {
        error = "expected ']' after ellipsis";
        return std::nullopt;
      }
      break;
    }
    char closer = 0;
    if (scan.accept('(')) {
      closer = ')';
    } else if (scan.accept('[')) {
      closer = ']';
    } else {
      error = "expected '(' or '[' to open a point";
      return std::nullopt;
    }
    const auto x = scan.number();
    if (!x || !scan.accept(',')) {
      error = "malformed point";
      return std::nullopt;
    }
    const auto y = scan.number();
    if (!y || !scan.accept(closer)) {
      error = "malformed point";
      return std::nullopt;
    }
    points.push_back({*x, *y});
    scan.accept(',');  // separator before next point or the closing bracket
  }
  scan.accept('.');
  if (!scan.at_end()) {
    error = "trailing characters after list";
    return std::nullopt;
  }
  return points;
}

}  // namespace

const std::string& payload_kind_name(PayloadKind kind) {
  for (const auto& [k, name] : kind_table()) {
    if (k == kind) return name;
  }
  fail("unknown payload kind");
}

std::optional<PayloadKind> payload_kind_from_name(const std::string& name) {
  for (const auto& [k, n] : kind_table()) {
    if (n == name) return k;
  }
  return std::nullopt;
}

PayloadKind payload_kind(const Payload& payload) {
  return std::visit(
      [](const auto& value) -> PayloadKind {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, PointsPayload>) return PayloadKind::Points;
        if constexpr (std::is_same_v<T, BoxPayload>) return PayloadKind::Box;
        if constexpr (std::is_same_v<T, TrajectoryPayload>) return PayloadKind::Trajectory;
        if constexpr (std::is_same_v<T, OptionPayload>) return PayloadKind::Option;
        if constexpr (std::is_same_v<T, FreeTextPayload>) return PayloadKind::FreeText;
        if constexpr (std::is_same_v<T, WorkflowPayload>) return PayloadKind::Workflow;
      },
      payload);
}

std::string render_payload(const Payload& payload) {
  std::ostringstream out;
  switch (payload_kind(payload)) {
    case PayloadKind::Points: {
      const auto& p = std::get<PointsPayload>(payload);
      out << '[';
      for (std::size_t i = 0; i < p.points.size(); ++i) {
        if (i) out << ", ";
        out << '(' << format_number(p.points[i].x) << ", " << format_number(p.points[i].y) << ')';
      }
      out << ']';
      break;
    }
    case PayloadKind::Trajectory: {
      const auto& p = std::get<TrajectoryPayload>(payload);
      out << '[';
      for (std::size_t i = 0; i < p.points.size(); ++i) {
        if (i) out << ", ";
        out << '[' << format_number(p.points[i].x) << ", " << format_number(p.points[i].y) << ']';
      }
      out << ']';
      break;
    }
    case PayloadKind::Box: {
      const auto& b = std::get<BoxPayload>(payload).box;
      out << '[' << format_number(b.x1) << ", " << format_number(b.y1) << ", "
          << format_number(b.x2) << ", " << format_number(b.y2) << ']';
      break;
    }
    case PayloadKind::Option:
      out << '(' << std::get<OptionPayload>(payload).letter << ')';
      break;
    case PayloadKind::FreeText:
      out << std::get<FreeTextPayload>(payload).text;
      break;
    case PayloadKind::Workflow:
      out << std::get<WorkflowPayload>(payload).graph.dump();
      break;
  }
  return out.str();
}

PayloadParseResult parse_payload(const std::string& text, PayloadKind kind) {
  try {
    switch (kind) {
      case PayloadKind::Points:
      case PayloadKind::Trajectory: {
        Scanner scan(text);
        std::string error;
        auto points = parse_point_list(scan, error);
        if (!points) return parse_error(error);
        if (kind == PayloadKind::Points) return {Payload{PointsPayload{std::move(*points), {}}}, ""};
        return {Payload{TrajectoryPayload{std::move(*points)}}, ""};
      }
      case PayloadKind::Box: {
        Scanner scan(text);
        const char closer = scan.accept('[') ? ']' : (scan.accept('(') ? ')' : 0);
        if (closer == 0) return parse_error("expected '[' for box");
        double coords[4];
        for (int i = 0; i < 4; ++i) {
          if (i && !scan.accept(',')) return parse_error("box needs 4 comma-separated numbers");
          const auto v = scan.number();
          if (!v) return parse_error("box needs 4 comma-separated numbers");
          coords[i] = *v;
        }
        if (!scan.accept(closer)) return parse_error("unterminated box");
        scan.accept('.');
        if (!scan.at_end()) return parse_error("trailing characters after box");
        if (!(coords[0] < coords[2]) || !(coords[1] < coords[3])) {
          return parse_error("box inversion");
        }
        return {Payload{BoxPayload{Box2D{coords[0], coords[1], coords[2], coords[3]}}}, ""};
      }
      case PayloadKind::Option: {
        Scanner scan(text);
        const bool open = scan.accept('(');
        scan.skip_ws();
        const auto rest = scan.rest();
        if (rest.empty() || !std::isalpha(static_cast<unsigned char>(rest[0]))) {
          return parse_error("expected option letter");
        }
        Scanner tail(rest.substr(1));
        if (open) {
          if (!tail.accept(')')) return parse_error("unbalanced parenthesis in option");
        } else {
          tail.accept(')');
        }
        tail.accept('.');
        if (!tail.at_end()) return parse_error("trailing characters after option letter");
        const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(rest[0])));
        return {Payload{OptionPayload{letter}}, ""};
      }
      case PayloadKind::FreeText: {
        auto trimmed = trim(text);
        if (trimmed.empty()) return parse_error("empty answer text");
        return {Payload{FreeTextPayload{std::move(trimmed)}}, ""};
      }
      case PayloadKind::Workflow: {
        std::string body = trim(text);
        // tolerate fenced JSON
        if (body.rfind("```", 0) == 0) {
          const auto first_newline = body.find('\n');
          const auto last_fence = body.rfind("```");
          if (first_newline == std::string::npos || last_fence <= first_newline) {
            return parse_error("malformed code fence");
          }
          body = trim(body.substr(first_newline + 1, last_fence - first_newline - 1));
        }
        auto graph = nlohmann::ordered_json::parse(body, nullptr, false);
        if (graph.is_discarded() || !graph.is_object()) {
          return parse_error("workflow answer is not a JSON object");
        }
        if (!graph.contains("nodes") || !graph["nodes"].is_array()) {
          return parse_error("workflow graph missing nodes array");
        }
        return {Payload{WorkflowPayload{std::move(graph)}}, ""};
      }
    }
  } catch (const std::exception& e) {
    return parse_error(std::string("parse exception: ") + e.what());
  }
  return parse_error("unknown payload kind");
}

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

std::optional<std::string> extract_answer_block(const std::string& text) {
  const std::string open = "<answer>";
  const std::string close = "</answer>";
  const auto start = text.rfind(open);
  if (start == std::string::npos) return std::nullopt;
  const auto end = text.find(close, start + open.size());
  if (end == std::string::npos) return std::nullopt;
  return text.substr(start + open.size(), end - start - open.size());
}

bool well_formed_think_answer(const std::string& text) {
  if (count_occurrences(text, "<think>") != 1 || count_occurrences(text, "</think>") != 1 ||
      count_occurrences(text, "<answer>") != 1 || count_occurrences(text, "</answer>") != 1) {
    return false;
  }
  const auto think_open = text.find("<think>");
  const auto think_close = text.find("</think>");
  const auto answer_open = text.find("<answer>");
  const auto answer_close = text.find("</answer>");
  return think_open < think_close && think_close < answer_open && answer_open < answer_close;
}

namespace {

nlohmann::ordered_json points_to_json(const std::vector<PixelPoint>& points) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : points) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<PixelPoint> points_from_json(const nlohmann::ordered_json& arr,
                                         const std::string& context) {
  if (!arr.is_array()) fail(context + ": expected array of points");
  std::vector<PixelPoint> points;
  for (const auto& entry : arr) {
    if (!entry.is_array() || entry.size() != 2) fail(context + ": point must be [x, y]");
    points.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  return points;
}

nlohmann::ordered_json region_to_json(const Region& region) {
  nlohmann::ordered_json j;
  if (std::holds_alternative<Mask2D>(region)) {
    const auto& mask = std::get<Mask2D>(region);
    j["type"] = "mask";
    j["width"] = mask.width;
    j["height"] = mask.height;
    j["runs"] = mask.runs;
  } else {
    j["type"] = "polygon";
    j["vertices"] = points_to_json(std::get<Polygon>(region));
  }
  return j;
}

Region region_from_json(const nlohmann::ordered_json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "mask") {
    Mask2D mask;
    mask.width = j.at("width").get<int>();
    mask.height = j.at("height").get<int>();
    mask.runs = j.at("runs").get<std::vector<std::uint32_t>>();
    return mask;
  }
  if (type == "polygon") {
    return points_from_json(j.at("vertices"), "region polygon");
  }
  fail("region: unknown type " + type);
}

}  // namespace

nlohmann::ordered_json payload_to_json(const Payload& payload) {
  nlohmann::ordered_json j;
  j["kind"] = payload_kind_name(payload_kind(payload));
  switch (payload_kind(payload)) {
    case PayloadKind::Points: {
      const auto& p = std::get<PointsPayload>(payload);
      j["points"] = points_to_json(p.points);
      if (p.region) j["region"] = region_to_json(*p.region);
      break;
    }
    case PayloadKind::Box: {
      const auto& b = std::get<BoxPayload>(payload).box;
      j["box"] = {b.x1, b.y1, b.x2, b.y2};
      break;
    }
    case PayloadKind::Trajectory:
      j["points"] = points_to_json(std::get<TrajectoryPayload>(payload).points);
      break;
    case PayloadKind::Option:
      j["letter"] = std::string(1, std::get<OptionPayload>(payload).letter);
      break;
    case PayloadKind::FreeText:
      j["text"] = std::get<FreeTextPayload>(payload).text;
      break;
    case PayloadKind::Workflow:
      j["graph"] = std::get<WorkflowPayload>(payload).graph;
      break;
  }
  return j;
}

Payload payload_from_json(const nlohmann::ordered_json& j) {
  const auto kind = payload_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) fail("payload: unknown kind " + j.at("kind").get<std::string>());
  switch (*kind) {
    case PayloadKind::Points: {
      PointsPayload p;
      p.points = points_from_json(j.at("points"), "points payload");
      if (j.contains("region")) p.region = region_from_json(j.at("region"));
      return p;
    }
    case PayloadKind::Box: {
      const auto& arr = j.at("box");
      if (!arr.is_array() || arr.size() != 4) fail("box payload: expected 4 numbers");
      return BoxPayload{Box2D{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
                              arr[3].get<double>()}};
    }
    case PayloadKind::Trajectory:
      return TrajectoryPayload{points_from_json(j.at("points"), "trajectory payload")};
    case PayloadKind::Option: {
      const auto letter = j.at("letter").get<std::string>();
      if (letter.size() != 1) fail("option payload: letter must be one character");
      return OptionPayload{letter[0]};
    }
    case PayloadKind::FreeText:
      return FreeTextPayload{j.at("text").get<std::string>()};
    case PayloadKind::Workflow:
      return WorkflowPayload{j.at("graph")};
  }
  fail("payload: unreachable");
}

namespace {

void check_point_bounds(const std::vector<PixelPoint>& points, int width, int height,
                        const std::string& context) {
  for (const auto& p : points) {
    if (p.x < 0 || p.y < 0 || p.x > width - 1 || p.y > height - 1) {
      fail(context + ": point (" + format_number(p.x) + ", " + format_number(p.y) +
           ") outside image bounds " + std::to_string(width) + "x" + std::to_string(height));
    }
  }
}

}  // namespace

void QAItem::validate() const {
  if (id.empty()) fail("item: empty id");
  if (payload_kind(ground_truth) != target_kind) {
    fail("item " + id + ": ground truth kind " + payload_kind_name(payload_kind(ground_truth)) +
         " does not match target kind " + payload_kind_name(target_kind));
  }
  if (target_kind == PayloadKind::Option) {
    const char letter = std::get<OptionPayload>(ground_truth).letter;
    if (letter < 'A' || letter > 'Z') fail("item " + id + ": option letter out of range");
    if (!options.empty()) {
      const auto index = static_cast<std::size_t>(letter - 'A');
      if (index >= options.size()) fail("item " + id + ": GT letter beyond option list");
    }
  }
  if (image_size) {
    const auto [width, height] = *image_size;
    switch (target_kind) {
      case PayloadKind::Points:
        check_point_bounds(std::get<PointsPayload>(ground_truth).points, width, height,
                           "item " + id);
        break;
      case PayloadKind::Trajectory:
        check_point_bounds(std::get<TrajectoryPayload>(ground_truth).points, width, height,
                           "item " + id);
        break;
      case PayloadKind::Box: {
        const auto& b = std::get<BoxPayload>(ground_truth).box;
        b.validate("item " + id);
        if (b.x1 < 0 || b.y1 < 0 || b.x2 > width || b.y2 > height) {
          fail("item " + id + ": box outside image bounds");
        }
        break;
      }
      default:
        break;
    }
  }
}

nlohmann::ordered_json QAItem::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["family"] = family_name(family);
  j["prompt"] = prompt;
  j["images"] = images;
  if (image_size) j["image_size"] = {image_size->first, image_size->second};
  j["target_kind"] = payload_kind_name(target_kind);
  j["ground_truth"] = payload_to_json(ground_truth);
  if (!options.empty()) j["options"] = options;
  j["provenance"] = {{"scene_id", provenance.scene_id},
                     {"template_id", provenance.template_id},
                     {"seed", provenance.seed}};
  return j;
}

QAItem QAItem::from_json(const nlohmann::ordered_json& j) {
  QAItem item;
  item.id = j.at("id").get<std::string>();
  const auto family = family_from_name(j.at("family").get<std::string>());
  if (!family) fail("item " + item.id + ": unknown family " + j.at("family").get<std::string>());
  item.family = *family;
  item.prompt = j.at("prompt").get<std::string>();
  item.images = j.at("images").get<std::vector<std::string>>();
  if (j.contains("image_size")) {
    item.image_size = {j["image_size"][0].get<int>(), j["image_size"][1].get<int>()};
  }
  const auto kind = payload_kind_from_name(j.at("target_kind").get<std::string>());
  if (!kind) fail("item " + item.id + ": unknown target kind");
  item.target_kind = *kind;
  item.ground_truth = payload_from_json(j.at("ground_truth"));
  if (j.contains("options")) item.options = j["options"].get<std::vector<std::string>>();
  const auto& prov = j.at("provenance");
  item.provenance.scene_id = prov.at("scene_id").get<std::string>();
  item.provenance.template_id = prov.at("template_id").get<std::string>();
  item.provenance.seed = prov.at("seed").get<std::uint64_t>();
  return item;
}

bool operator==(const QAItem& a, const QAItem& b) { return a.to_json() == b.to_json(); }

}  // namespace ekit::scene
