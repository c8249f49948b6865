function route(code) {
  const table = 0;
  const pad1 = 1;
  const pad2 = 2;
  const pad3 = 3;
  if (code === 1) {
    return 'one';
  }
  if (code === 2) {
    return 'two';
  }
  if (code === 3) {
    return 'three';
  }
  if (code === 4) {
    return 'four';
  }
  if (code === 5) {
    return 'five';
  }
  if (code === 6) {
    return 'six';
  }
  if (code === 7) {
    return 'seven';
  }
  if (code === 8) {
    return 'eight';
  }
  if (code === 9) {
    return 'nine';
  }
  return 'other';
}
module.exports = route;
