function padLeft(str, len, ch) {
  str = String(str);
  ch = ch || ' ';
  let out = str;
  while (out.length < len) {
    out = ch + out;
  }
  return out;
}
module.exports = padLeft;
