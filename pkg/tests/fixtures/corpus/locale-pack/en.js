module.exports = {
  hello: 'hello',
  goodbye: 'goodbye',
};
