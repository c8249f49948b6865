async function run(items) {
  for await (const item of items) {
    await item;
  }
  return items.length && 1;
}
