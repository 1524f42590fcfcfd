#include "tfive/fixture.hpp"

namespace tfive {

namespace {

RMat block(const char* e11, const char* e12, const char* e21, const char* e22) {
  return {parse_rational(e11), parse_rational(e12), parse_rational(e21), parse_rational(e22)};
}

}  // namespace

const std::array<RMat, 5>& reference_large_t5() {
  static const std::array<RMat, 5> set{
      block("2316901181183546099017091770605/162259276829213363391578010288128",
            "-5739565125354385225872252139467/10141204801825835211973625643008",
            "5739565125354385225872252139467/10141204801825835211973625643008",
            "-56873565598434451746179265262997/2535301200456458802993406410752"),
      block("-330621418565185387036477002414115/10384593717069655257060992658440192",
            "815211547324287408551802829225453/649037107316853453566312041152512",
            "-815211547324287408551802829225453/649037107316853453566312041152512",
            "251257742411123530141636860664321/5070602400912917605986812821504"),
      block("1231069874758438218672166401101419/20769187434139310514121985316880384",
            "-733625671232943434981364913268293/324518553658426726783156020576256",
            "733625671232943434981364913268293/324518553658426726783156020576256",
            "-3497495142386849315118349227834509/40564819207303340847894502572032"),
      block("-587406988058843286220046809310939/20769187434139310514121985316880384",
            "88287046124795489454709265219111/81129638414606681695789005144064",
            "-88287046124795489454709265219111/81129638414606681695789005144064",
            "1698486469749761796168679052449441/40564819207303340847894502572032"),
      block("-907999771200015425284613822879209/41538374868278621028243970633760768",
            "1065154343959802482930848455328023/1298074214633706907132624082305024",
            "-1065154343959802482930848455328023/1298074214633706907132624082305024",
            "2499017758464245906295246824575579/81129638414606681695789005144064"),
  };
  return set;
}

}  // namespace tfive
