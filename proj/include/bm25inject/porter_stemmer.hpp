#pragma once

#include <string>
#include <string_view>

namespace bm25inject {

/// Martin Porter's 1980 suffix-stripping stemmer, following the behaviour of
/// his reference C implementation (including its "bli"->"ble" and
/// "logi"->"log" departures). Expects a lowercase ASCII word; words of one
/// or two letters are returned unchanged.
class porter_stemmer {
  public:
    [[nodiscard]] auto operator()(std::string_view word) const -> std::string
    {
        state s{std::string(word)};
        if (s.b.size() <= 2) {
            return s.b;
        }
        s.k = static_cast<int>(s.b.size()) - 1;
        s.step1ab();
        if (s.k > 0) {
            s.step1c();
            s.step2();
            s.step3();
            s.step4();
            s.step5();
        }
        s.b.resize(static_cast<std::size_t>(s.k) + 1);
        return s.b;
    }

  private:
    struct state {
        std::string b;
        int k = 0;
        int j = 0;

        [[nodiscard]] auto at(int i) const -> char { return b[static_cast<std::size_t>(i)]; }

        [[nodiscard]] auto cons(int i) const -> bool
        {
            switch (at(i)) {
            case 'a':
            case 'e':
            case 'i':
            case 'o':
            case 'u': return false;
            case 'y': return i == 0 ? true : !cons(i - 1);
            default: return true;
            }
        }

        // Number of consonant-vowel sequences in b[0..j].
        [[nodiscard]] auto m() const -> int
        {
            int n = 0;
            int i = 0;
            while (true) {
                if (i > j) {
                    return n;
                }
                if (!cons(i)) {
                    break;
                }
                ++i;
            }
            ++i;
            while (true) {
                while (true) {
                    if (i > j) {
                        return n;
                    }
                    if (cons(i)) {
                        break;
                    }
                    ++i;
                }
                ++i;
                ++n;
                while (true) {
                    if (i > j) {
                        return n;
                    }
                    if (!cons(i)) {
                        break;
                    }
                    ++i;
                }
                ++i;
            }
        }

        [[nodiscard]] auto vowel_in_stem() const -> bool
        {
            for (int i = 0; i <= j; ++i) {
                if (!cons(i)) {
                    return true;
                }
            }
            return false;
        }

        [[nodiscard]] auto double_consonant(int i) const -> bool
        {
            return i >= 1 && at(i) == at(i - 1) && cons(i);
        }

        [[nodiscard]] auto cvc(int i) const -> bool
        {
            if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) {
                return false;
            }
            char ch = at(i);
            return ch != 'w' && ch != 'x' && ch != 'y';
        }

        auto ends(std::string_view s) -> bool
        {
            auto len = static_cast<int>(s.size());
            if (len > k + 1) {
                return false;
            }
            if (std::string_view(b).substr(static_cast<std::size_t>(k + 1 - len), s.size()) != s) {
                return false;
            }
            j = k - len;
            return true;
        }

        void set_to(std::string_view s)
        {
            b.replace(static_cast<std::size_t>(j + 1), static_cast<std::size_t>(k - j), s);
            k = j + static_cast<int>(s.size());
        }

        void replace_if_measure(std::string_view s)
        {
            if (m() > 0) {
                set_to(s);
            }
        }

        void step1ab()
        {
            if (at(k) == 's') {
                if (ends("sses")) {
                    k -= 2;
                } else if (ends("ies")) {
                    set_to("i");
                } else if (at(k - 1) != 's') {
                    --k;
                }
            }
            if (ends("eed")) {
                if (m() > 0) {
                    --k;
                }
            } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
                k = j;
                if (ends("at")) {
                    set_to("ate");
                } else if (ends("bl")) {
                    set_to("ble");
                } else if (ends("iz")) {
                    set_to("ize");
                } else if (double_consonant(k)) {
                    --k;
                    char ch = at(k);
                    if (ch == 'l' || ch == 's' || ch == 'z') {
                        ++k;
                    }
                } else if (m() == 1 && cvc(k)) {
                    set_to("e");
                }
            }
        }

        void step1c()
        {
            if (ends("y") && vowel_in_stem()) {
                b[static_cast<std::size_t>(k)] = 'i';
            }
        }

        void step2()
        {
            if (k < 1) {
                return;
            }
            switch (at(k - 1)) {
            case 'a':
                if (ends("ational")) { replace_if_measure("ate"); break; }
                if (ends("tional")) { replace_if_measure("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { replace_if_measure("ence"); break; }
                if (ends("anci")) { replace_if_measure("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { replace_if_measure("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { replace_if_measure("ble"); break; }
                if (ends("alli")) { replace_if_measure("al"); break; }
                if (ends("entli")) { replace_if_measure("ent"); break; }
                if (ends("eli")) { replace_if_measure("e"); break; }
                if (ends("ousli")) { replace_if_measure("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { replace_if_measure("ize"); break; }
                if (ends("ation")) { replace_if_measure("ate"); break; }
                if (ends("ator")) { replace_if_measure("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { replace_if_measure("al"); break; }
                if (ends("iveness")) { replace_if_measure("ive"); break; }
                if (ends("fulness")) { replace_if_measure("ful"); break; }
                if (ends("ousness")) { replace_if_measure("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { replace_if_measure("al"); break; }
                if (ends("iviti")) { replace_if_measure("ive"); break; }
                if (ends("biliti")) { replace_if_measure("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { replace_if_measure("log"); break; }
                break;
            default: break;
            }
        }

        void step3()
        {
            switch (at(k)) {
            case 'e':
                if (ends("icate")) { replace_if_measure("ic"); break; }
                if (ends("ative")) { replace_if_measure(""); break; }
                if (ends("alize")) { replace_if_measure("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { replace_if_measure("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { replace_if_measure("ic"); break; }
                if (ends("ful")) { replace_if_measure(""); break; }
                break;
            case 's':
                if (ends("ness")) { replace_if_measure(""); break; }
                break;
            default: break;
            }
        }

        void step4()
        {
            if (k < 1) {
                return;
            }
            switch (at(k - 1)) {
            case 'a':
                if (ends("al")) break;
                return;
            case 'c':
                if (ends("ance")) break;
                if (ends("ence")) break;
                return;
            case 'e':
                if (ends("er")) break;
                return;
            case 'i':
                if (ends("ic")) break;
                return;
            case 'l':
                if (ends("able")) break;
                if (ends("ible")) break;
                return;
            case 'n':
                if (ends("ant")) break;
                if (ends("ement")) break;
                if (ends("ment")) break;
                if (ends("ent")) break;
                return;
            case 'o':
                if (ends("ion") && j >= 0 && (at(j) == 's' || at(j) == 't')) break;
                if (ends("ou")) break;
                return;
            case 's':
                if (ends("ism")) break;
                return;
            case 't':
                if (ends("ate")) break;
                if (ends("iti")) break;
                return;
            case 'u':
                if (ends("ous")) break;
                return;
            case 'v':
                if (ends("ive")) break;
                return;
            case 'z':
                if (ends("ize")) break;
                return;
            default: return;
            }
            if (m() > 1) {
                k = j;
            }
        }

        void step5()
        {
            j = k;
            if (at(k) == 'e') {
                int a = m();
                if (a > 1 || (a == 1 && !cvc(k - 1))) {
                    --k;
                }
            }
            if (at(k) == 'l' && double_consonant(k) && m() > 1) {
                --k;
            }
        }
    };
};

}  // namespace bm25inject
