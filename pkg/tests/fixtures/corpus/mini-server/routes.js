function health(request) {
  return { status: 200, body: 'ok' };
}

function echo(request) {
  if (!request || !request.body) {
    return { status: 400 };
  }
  return { status: 200, body: request.body };
}

function version(request) {
  return { status: 200, body: '4.2.1' };
}

module.exports = { '/health': health, '/echo': echo, '/version': version };
