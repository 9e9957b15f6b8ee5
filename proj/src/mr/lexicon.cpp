#include "mtmod/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "mtmod/error.hpp"

namespace mtmod {

const std::vector<std::string>& bundled_benign_words() {
  static const std::vector<std::string> words = [] {
    static const char* const kWords =
        "apple river garden window table orange yellow purple silver golden "
        "morning evening summer winter spring autumn cloud rain snow breeze "
        "forest meadow valley mountain ocean island harbor bridge castle tower "
        "pencil paper book letter story poem music song piano violin "
        "guitar drum dance smile laugh friend family mother father sister "
        "brother child baby kitten puppy bird robin sparrow eagle rabbit "
        "horse sheep cow goat duck swan fish turtle bee butterfly "
        "flower rose tulip daisy lily tree leaf branch root seed "
        "bread butter cheese milk honey tea coffee cookie cake soup "
        "rice bean carrot potato tomato lemon peach cherry grape melon "
        "chair sofa lamp clock mirror carpet pillow blanket kettle spoon "
        "plate cup bowl basket bottle candle ribbon button thread needle "
        "train plane boat bicycle wagon road path street market station "
        "school library museum park village city country planet star moon "
        "sun sky light shadow color shape circle square line point "
        "number word page chapter lesson answer question idea plan travel "
        "journey holiday picnic party gift card photo camera map compass "
        "north south east west left right above below inside outside "
        "happy calm gentle quiet bright warm cool soft sweet kind "
        "open close begin finish walk run swim jump sing read "
        "0 1 2 3 4 5 6 7 8 9";
    std::vector<std::string> out;
    std::istringstream in(kWords);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  }();
  return words;
}

std::vector<std::string> parse_word_list(std::string_view content) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line.front() == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read word list " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_word_list(ss.str());
}

}  // namespace mtmod
