namespace Fixtures.Support
{
    public static class Numbers
    {
        public static int Two() => 2;
    }
}
