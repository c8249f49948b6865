function check(a, b) {
  const both = a && b;
  const either = a || b;
  const fallback = a ?? b;
  return a ? both : either || fallback;
}
