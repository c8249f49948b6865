const once = (fn) => {
  let done = false;
  return (...args) => (done ? undefined : ((done = true), fn(...args)));
};
module.exports = once;
