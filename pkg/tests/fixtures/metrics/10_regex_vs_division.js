const re = /ab+c/g;
const ratio = 10 / 2 / 1;
const stripped = 'a//b'.replace(/\/+/g, '-');
